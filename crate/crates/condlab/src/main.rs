fn main() {
    std::process::exit(condlab::run(std::env::args_os()));
}
