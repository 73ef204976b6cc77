fn main() -> std::process::ExitCode {
    rblab::cli::main()
}
