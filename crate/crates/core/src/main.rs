fn main() {
    std::process::exit(brokensym::cli::main_with_args(std::env::args_os()));
}
