//! `Q(u) = sin u/u + cos u/u² − sin u/u³` and
//! `W(u) = sin u/u + 3 cos u/u² − 3 sin u/u³`.
//!
//! Each of the three terms grows like `1/u³` near the origin while the sums
//! stay finite, so below [`SERIES_THRESHOLD`] both kernels switch to their
//! Taylor series in `u²`.

/// Splice point between the series and the closed form.
pub const SERIES_THRESHOLD: f64 = 0.5;

const SERIES_TERMS: usize = 10;

const fn factorial(n: usize) -> f64 {
    let mut acc = 1.0;
    let mut k = 2;
    while k <= n {
        acc *= k as f64;
        k += 1;
    }
    acc
}

const fn alternating(j: usize) -> f64 {
    if j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

// Q(u) = Σⱼ (−1)ʲ 4(j+1)² u²ʲ / (2j+3)!
const Q_COEFFS: [f64; SERIES_TERMS] = {
    let mut c = [0.0; SERIES_TERMS];
    let mut j = 0;
    while j < SERIES_TERMS {
        let jp = (j + 1) as f64;
        c[j] = alternating(j) * 4.0 * jp * jp / factorial(2 * j + 3);
        j += 1;
    }
    c
};

// W(u) = Σⱼ (−1)ʲ 4j(j+1) u²ʲ / (2j+3)!
const W_COEFFS: [f64; SERIES_TERMS] = {
    let mut c = [0.0; SERIES_TERMS];
    let mut j = 0;
    while j < SERIES_TERMS {
        c[j] = alternating(j) * 4.0 * (j as f64) * ((j + 1) as f64) / factorial(2 * j + 3);
        j += 1;
    }
    c
};

// sin u/u³ − cos u/u² = Σⱼ (−1)ʲ 2(j+1) u²ʲ / (2j+3)!
const FREE_COEFFS: [f64; SERIES_TERMS] = {
    let mut c = [0.0; SERIES_TERMS];
    let mut j = 0;
    while j < SERIES_TERMS {
        c[j] = alternating(j) * 2.0 * ((j + 1) as f64) / factorial(2 * j + 3);
        j += 1;
    }
    c
};

fn horner(coeffs: &[f64; SERIES_TERMS], v: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * v + c)
}

pub fn q_kernel(u: f64) -> f64 {
    let u = u.abs();
    if u < SERIES_THRESHOLD {
        return horner(&Q_COEFFS, u * u);
    }
    let (s, c) = u.sin_cos();
    let u2 = u * u;
    let u3 = u2 * u;
    s / u + c / u2 - s / u3
}

pub fn w_kernel(u: f64) -> f64 {
    let u = u.abs();
    if u < SERIES_THRESHOLD {
        return horner(&W_COEFFS, u * u);
    }
    let (s, c) = u.sin_cos();
    let u2 = u * u;
    let u3 = u2 * u;
    s / u + 3.0 * c / u2 - 3.0 * s / u3
}

/// `Q(u) − r·W(u)` as one expression, where `r = y²/A² ∈ [0, 1]`.
///
/// At `r = 1` the `sin u/u` parts cancel identically, leaving
/// `2(sin u/u³ − cos u/u²)`, evaluated with the same operations as
/// [`free_space_shape`].
pub fn q_minus_rw(u: f64, r: f64) -> f64 {
    let u = u.abs();
    if u < SERIES_THRESHOLD {
        let v = u * u;
        return horner(&Q_COEFFS, v) - r * horner(&W_COEFFS, v);
    }
    let (s, c) = u.sin_cos();
    let u2 = u * u;
    let u3 = u2 * u;
    let k1 = 1.0 - r;
    let k3 = 1.0 - 3.0 * r;
    k1 * s / u + k3 * c / u2 - k3 * s / u3
}

/// `sin u/u³ − cos u/u²`, regular at the origin where it tends to `1/3`.
pub fn free_space_shape(u: f64) -> f64 {
    let u = u.abs();
    if u < SERIES_THRESHOLD {
        return horner(&FREE_COEFFS, u * u);
    }
    let (s, c) = u.sin_cos();
    let u2 = u * u;
    let u3 = u2 * u;
    s / u3 - c / u2
}

/// Upper bound on `|Q(u)|` decaying like `1/u`.
pub(crate) fn q_envelope(u: f64) -> f64 {
    let u = u.abs();
    if u == 0.0 {
        return 1.0;
    }
    (1.0 / u + 1.0 / (u * u) + 1.0 / (u * u * u)).min(1.0)
}

/// Upper bound on `|W(u)|` decaying like `1/u`.
pub(crate) fn w_envelope(u: f64) -> f64 {
    let u = u.abs();
    if u == 0.0 {
        return 1.0;
    }
    (1.0 / u + 3.0 / (u * u) + 3.0 / (u * u * u)).min(1.0)
}
