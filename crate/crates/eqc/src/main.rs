fn main() { eqc::cli::run(); }
