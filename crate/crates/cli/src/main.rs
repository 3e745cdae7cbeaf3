fn main() {
    std::process::exit(moments_cli::run(std::env::args_os()));
}
