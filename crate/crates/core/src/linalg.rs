//! Dense Hermitian eigendecompositions via the LAPACK divide-and-conquer
//! drivers (`dsyevd` / `zheevd`).
//!
//! Eigenvalues come back ascending; eigenvectors are the columns of the
//! returned matrix. Column-major marshalling stays inside this module.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigendecomposition of a real symmetric matrix.
pub fn eigh_real(m: &Array2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let n = square_dim(m.nrows(), m.ncols())?;
    if n == 0 {
        return Ok((Array1::zeros(0), Array2::zeros((0, 0))));
    }
    // column-major copy of the lower triangle (full copy is simplest)
    let mut a: Vec<f64> = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            a.push(m[[i, j]]);
        }
    }
    let mut w = vec![0.0f64; n];
    let nn = n as i32;
    let mut info = 0i32;
    unsafe {
        let jobz = b'V' as std::os::raw::c_char;
        let uplo = b'L' as std::os::raw::c_char;
        // workspace query
        let mut wkopt = 0.0f64;
        let mut iwkopt = 0i32;
        let query = -1i32;
        lapack_sys::dsyevd_(
            &jobz,
            &uplo,
            &nn,
            a.as_mut_ptr(),
            &nn,
            w.as_mut_ptr(),
            &mut wkopt,
            &query,
            &mut iwkopt,
            &query,
            &mut info,
        );
        if info != 0 {
            return Err(Error::Lapack {
                routine: "dsyevd (workspace query)",
                info,
            });
        }
        let lwork = wkopt as i32;
        let liwork = iwkopt;
        let mut work = vec![0.0f64; lwork.max(1) as usize];
        let mut iwork = vec![0i32; liwork.max(1) as usize];
        lapack_sys::dsyevd_(
            &jobz,
            &uplo,
            &nn,
            a.as_mut_ptr(),
            &nn,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack {
            routine: "dsyevd",
            info,
        });
    }
    Ok((Array1::from_vec(w), col_major_real(a, n)))
}

/// Eigendecomposition of a complex Hermitian matrix.
pub fn eigh_complex(m: &Array2<Complex64>) -> Result<(Array1<f64>, Array2<Complex64>)> {
    let n = square_dim(m.nrows(), m.ncols())?;
    if n == 0 {
        return Ok((Array1::zeros(0), Array2::zeros((0, 0))));
    }
    let mut a: Vec<Complex64> = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            a.push(m[[i, j]]);
        }
    }
    let mut w = vec![0.0f64; n];
    let nn = n as i32;
    let mut info = 0i32;
    unsafe {
        let jobz = b'V' as std::os::raw::c_char;
        let uplo = b'L' as std::os::raw::c_char;
        let mut wkopt = lapack_sys::__BindgenComplex { re: 0.0f64, im: 0.0 };
        let mut rwkopt = 0.0f64;
        let mut iwkopt = 0i32;
        let query = -1i32;
        lapack_sys::zheevd_(
            &jobz,
            &uplo,
            &nn,
            a.as_mut_ptr() as *mut lapack_sys::c_double_complex,
            &nn,
            w.as_mut_ptr(),
            &mut wkopt,
            &query,
            &mut rwkopt,
            &query,
            &mut iwkopt,
            &query,
            &mut info,
        );
        if info != 0 {
            return Err(Error::Lapack {
                routine: "zheevd (workspace query)",
                info,
            });
        }
        let lwork = wkopt.re as i32;
        let lrwork = rwkopt as i32;
        let liwork = iwkopt;
        let mut work =
            vec![lapack_sys::__BindgenComplex { re: 0.0f64, im: 0.0 }; lwork.max(1) as usize];
        let mut rwork = vec![0.0f64; lrwork.max(1) as usize];
        let mut iwork = vec![0i32; liwork.max(1) as usize];
        lapack_sys::zheevd_(
            &jobz,
            &uplo,
            &nn,
            a.as_mut_ptr() as *mut lapack_sys::c_double_complex,
            &nn,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &lrwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack {
            routine: "zheevd",
            info,
        });
    }
    Ok((Array1::from_vec(w), col_major_complex(a, n)))
}

fn square_dim(rows: usize, cols: usize) -> Result<usize> {
    if rows != cols {
        return Err(Error::DimensionMismatch {
            left: rows,
            right: cols,
        });
    }
    Ok(rows)
}

fn col_major_real(a: Vec<f64>, n: usize) -> Array2<f64> {
    let mut v = Array2::zeros((n, n));
    for j in 0..n {
        for i in 0..n {
            v[[i, j]] = a[j * n + i];
        }
    }
    v
}

fn col_major_complex(a: Vec<Complex64>, n: usize) -> Array2<Complex64> {
    let mut v = Array2::zeros((n, n));
    for j in 0..n {
        for i in 0..n {
            v[[i, j]] = a[j * n + i];
        }
    }
    v
}
