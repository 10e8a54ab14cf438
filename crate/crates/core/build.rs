fn main() {
    // lapack-sys only declares the FFI symbols; the system OpenBLAS
    // (libopenblas-dev) carries both BLAS and LAPACK.
    println!("cargo:rustc-link-lib=openblas");
}
