fn main() {
    std::process::exit(switchstab::cli::main_with_args(std::env::args_os()));
}
