//! Exact binomial, pair-count and Krawchouk primitives shared by the
//! counting and Fourier modules.

use rug::Integer;

/// `C(n, m)`; zero when `m` is out of `[0, n]`.
pub fn binomial(n: i64, m: i64) -> Integer {
    if n < 0 || m < 0 || m > n {
        return Integer::new();
    }
    let m = m.min(n - m);
    Integer::from(Integer::binomial_u(n as u32, m as u32))
}

/// Number of ordered pairs `(x, y)` of weight-`k/2` words in `F_2^{k-1}`
/// whose difference is one fixed word of weight `m`:
/// `C(m, m/2) C(k-m-1, (k-m)/2)` for even `0 <= m <= k-2`, else zero.
pub fn f_km(k: i64, m: i64) -> Integer {
    if m < 0 || m % 2 != 0 || m > k - 2 || k % 2 != 0 {
        return Integer::new();
    }
    binomial(m, m / 2) * binomial(k - m - 1, (k - m) / 2)
}

/// Same count without the last-coordinate restriction, i.e. over weight-`k/2`
/// words of `F_2^k` whose difference is a fixed weight-`m` word with last
/// coordinate zero. Equals `2 f(k, m)`.
pub fn g_km(k: i64, m: i64) -> Integer {
    if m < 0 || m % 2 != 0 || m > k - 2 || k % 2 != 0 {
        return Integer::new();
    }
    binomial(m, m / 2) * binomial(k - m, (k - m) / 2)
}

/// `K_k^n(t) = sum_j (-1)^j C(t, j) C(n - t, k - j)`.
pub fn krawchouk_value(n: i64, k: i64, t: i64) -> Integer {
    let mut acc = Integer::new();
    for j in 0..=k {
        let term = binomial(t, j) * binomial(n - t, k - j);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}
