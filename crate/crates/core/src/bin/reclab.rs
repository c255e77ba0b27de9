fn main() -> std::process::ExitCode {
    reclab::cli::main_entry()
}
