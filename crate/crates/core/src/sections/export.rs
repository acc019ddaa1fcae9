use std::fmt::Write;

use super::{FiniteSection, Scalar};

/// Coordinate-format text: header, `N N nnz`, then `n m re im` per nonzero entry.
pub fn matrix_market<T: Scalar>(section: &FiniteSection<T>) -> String {
    let entries: Vec<_> = section.nonzeros().collect();
    let mut out = String::from("%%MatrixMarket matrix coordinate complex general\n");
    let _ = writeln!(out, "% tag {:?}", section.tag);
    let _ = writeln!(out, "{} {} {}", section.dim(), section.dim(), entries.len());
    for (n, m, x) in entries {
        let (re, im) = x.parts();
        let _ = writeln!(out, "{n} {m} {re:.17e} {im:.17e}");
    }
    out
}

/// Two-column `n value` text; a third column holds imaginary parts when any is nonzero.
pub fn vector_text<T: Scalar>(x: &[T]) -> String {
    let parts: Vec<(f64, f64)> = x.iter().map(Scalar::parts).collect();
    let complex = parts.iter().any(|p| p.1 != 0.0);
    let mut out = String::new();
    for (i, (re, im)) in parts.into_iter().enumerate() {
        if complex {
            let _ = writeln!(out, "{} {re:.17e} {im:.17e}", i + 1);
        } else {
            let _ = writeln!(out, "{} {re:.17e}", i + 1);
        }
    }
    out
}
