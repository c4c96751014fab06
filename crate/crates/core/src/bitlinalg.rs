//! Gaussian elimination over GF(2) for linear maps on at most 64 bits.

/// Kernel basis of the linear map whose `j`-th column (image of the `j`-th
/// unit vector) is `columns[j]`.
///
/// Columns are reduced in order against the pivots found so far, each pivot
/// keyed by its lowest set bit; a column that reduces to zero records the
/// combination of unit vectors that produced it as a kernel vector.
pub fn kernel_basis(columns: &[u64]) -> Vec<u64> {
    assert!(columns.len() <= 64, "at most 64 columns");
    let mut pivots: Vec<(u64, u64, u64)> = Vec::with_capacity(columns.len());
    let mut kernel = Vec::new();
    for (j, &col) in columns.iter().enumerate() {
        let mut image = col;
        let mut combo = 1u64 << j;
        for &(pivot_bit, p_image, p_combo) in &pivots {
            if image & pivot_bit != 0 {
                image ^= p_image;
                combo ^= p_combo;
            }
        }
        if image == 0 {
            kernel.push(combo);
        } else {
            pivots.push((image & image.wrapping_neg(), image, combo));
        }
    }
    kernel
}

pub fn kernel_dimension(columns: &[u64]) -> u32 {
    kernel_basis(columns).len() as u32
}

/// All `2^d` vectors of the span of `basis`, in Gray-code order.
pub fn span(basis: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(1 << basis.len());
    let mut v = 0u64;
    out.push(v);
    for i in 1u64..(1u64 << basis.len()) {
        v ^= basis[i.trailing_zeros() as usize];
        out.push(v);
    }
    out
}
