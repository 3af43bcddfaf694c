fn main() -> std::process::ExitCode {
    tornpaper::cli::main()
}
