fn main() -> std::process::ExitCode {
    butson_cli::main_exit()
}
