fn main() {
    std::process::exit(bq_harness::main_with_args(std::env::args_os()));
}
