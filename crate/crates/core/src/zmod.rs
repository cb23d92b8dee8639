//! Linear algebra over Z/m: Howell normal form, canonical submodules,
//! kernels, intersections and linear solving.

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Zn {
    m: u64,
}

impl fmt::Debug for Zn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.m)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd on signed integers: returns (g, s, t) with s*a + t*b = g >= 0.
fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Zn {
    pub fn new(m: u64) -> Self {
        assert!(m >= 2, "modulus must be at least 2");
        Zn { m }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    pub fn reduce_i(&self, a: i128) -> u64 {
        a.rem_euclid(self.m as i128) as u64
    }

    pub fn primes(&self) -> Vec<u64> {
        prime_factors(self.m)
    }

    pub fn inverse(&self, a: u64) -> Option<u64> {
        let (g, s, _) = xgcd(a as i128, self.m as i128);
        (g == 1).then(|| self.reduce_i(s))
    }

    pub fn is_unit(&self, a: u64) -> bool {
        gcd(a, self.m) == 1
    }

    /// A unit u with u*a = gcd(a, m) (mod m); for a = 0 returns (1, 0).
    pub fn normalizer(&self, a: u64) -> (u64, u64) {
        let a = a % self.m;
        if a == 0 {
            return (1, 0);
        }
        let g = gcd(a, self.m);
        let mg = self.m / g;
        if mg == 1 {
            return (1, 0);
        }
        let inv = Zn::new(mg)
            .inverse((a / g) % mg)
            .expect("coprime by construction");
        let mut u = inv;
        while gcd(u, self.m) != 1 {
            u += mg;
        }
        (u % self.m, g)
    }

    pub fn add_assign_scaled(&self, acc: &mut [u64], c: u64, v: &[u64]) {
        if c == 0 {
            return;
        }
        for (a, &x) in acc.iter_mut().zip(v) {
            if x != 0 {
                *a = self.add(*a, self.mul(c, x));
            }
        }
    }

    pub fn scale(&self, c: u64, v: &[u64]) -> Vec<u64> {
        v.iter().map(|&x| self.mul(c, x)).collect()
    }

    pub fn add_vec(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| self.add(x, y)).collect()
    }

    pub fn sub_vec(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| self.sub(x, y)).collect()
    }
}

pub fn is_zero_vec(v: &[u64]) -> bool {
    v.iter().all(|&x| x == 0)
}

fn leading(v: &[u64]) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

/// Howell normal form of the row span. Rows come back in echelon order,
/// pivots divide m, entries above pivots are reduced, zero rows dropped.
pub fn howell(zn: Zn, rows: Vec<Vec<u64>>, ncols: usize) -> Vec<Vec<u64>> {
    let m = zn.m;
    let mut a: Vec<Vec<u64>> = rows.into_iter().filter(|r| !is_zero_vec(r)).collect();
    let mut r = 0;
    for c in 0..ncols {
        let mut i = r;
        while i < a.len() {
            if a[i][c] == 0 {
                i += 1;
                continue;
            }
            if i == r {
                i += 1;
                continue;
            }
            if a[r][c] == 0 {
                a.swap(r, i);
                i += 1;
                continue;
            }
            let x = a[r][c] as i128;
            let y = a[i][c] as i128;
            let (g, s, t) = xgcd(x, y);
            let (s, t) = (zn.reduce_i(s), zn.reduce_i(t));
            let p = zn.reduce_i(y / g);
            let q = zn.reduce_i(-(x / g));
            let (ra, rb) = (a[r].clone(), a[i].clone());
            for j in c..ncols {
                a[r][j] = zn.add(zn.mul(s, ra[j]), zn.mul(t, rb[j]));
                a[i][j] = zn.add(zn.mul(p, ra[j]), zn.mul(q, rb[j]));
            }
            i += 1;
        }
        if r >= a.len() || a[r][c] == 0 {
            continue;
        }
        let (u, g) = zn.normalizer(a[r][c]);
        if u != 1 {
            for j in c..ncols {
                a[r][j] = zn.mul(u, a[r][j]);
            }
        }
        debug_assert_eq!(a[r][c], g);
        for i in 0..r {
            let q = a[i][c] / g;
            if q != 0 {
                let nq = zn.neg(q % m);
                let row = a[r].clone();
                zn.add_assign_scaled(&mut a[i][c..], nq, &row[c..]);
            }
        }
        let ann: Vec<u64> = zn.scale(m / g, &a[r]);
        if !is_zero_vec(&ann) {
            a.push(ann);
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Canonical additive subgroup of (Z/m)^dim, stored in Howell form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Submodule {
    zn: Zn,
    dim: usize,
    rows: Vec<Vec<u64>>,
}

impl fmt::Debug for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Submodule({:?}^{}, {:?})", self.zn, self.dim, self.rows)
    }
}

impl PartialOrd for Submodule {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Submodule {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dim, self.order(), &self.rows).cmp(&(other.dim, other.order(), &other.rows))
    }
}

impl Submodule {
    pub fn zero(zn: Zn, dim: usize) -> Self {
        Submodule {
            zn,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn full(zn: Zn, dim: usize) -> Self {
        Self::coordinate(zn, dim, 0..dim)
    }

    /// Span of the unit vectors with the given indices.
    pub fn coordinate(zn: Zn, dim: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut idx: Vec<usize> = idx.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        let rows = idx
            .into_iter()
            .map(|i| {
                let mut v = vec![0; dim];
                v[i] = 1;
                v
            })
            .collect();
        Submodule { zn, dim, rows }
    }

    pub fn span<I>(zn: Zn, dim: usize, gens: I) -> Self
    where
        I: IntoIterator<Item = Vec<u64>>,
    {
        let m = zn.modulus();
        let rows: Vec<Vec<u64>> = gens
            .into_iter()
            .map(|r| r.into_iter().map(|c| c % m).collect())
            .collect();
        debug_assert!(rows.iter().all(|r| r.len() == dim));
        Submodule {
            zn,
            dim,
            rows: howell(zn, rows, dim),
        }
    }

    pub fn from_canonical_rows(zn: Zn, dim: usize, rows: Vec<Vec<u64>>) -> Self {
        let s = Submodule::span(zn, dim, rows.clone());
        debug_assert_eq!(s.rows, rows);
        s
    }

    pub fn zn(&self) -> Zn {
        self.zn
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    fn pivot(&self, row: &[u64]) -> (usize, u64) {
        let c = leading(row).expect("Howell rows are nonzero");
        (c, row[c])
    }

    /// Remainder of v after greedy reduction; zero iff v is a member.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        for row in &self.rows {
            let (c, g) = self.pivot(row);
            let q = v[c] / g;
            if q != 0 {
                self.zn
                    .add_assign_scaled(&mut v[c..], self.zn.neg(q), &row[c..]);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    pub fn is_subset(&self, other: &Submodule) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Submodule) -> Submodule {
        if other.is_subset(self) {
            return self.clone();
        }
        if self.is_subset(other) {
            return other.clone();
        }
        Submodule::span(
            self.zn,
            self.dim,
            self.rows.iter().chain(&other.rows).cloned(),
        )
    }

    pub fn intersect(&self, other: &Submodule) -> Submodule {
        if self.is_subset(other) {
            return self.clone();
        }
        if other.is_subset(self) {
            return other.clone();
        }
        let d = self.dim;
        let mut rows = Vec::new();
        for u in &self.rows {
            let mut r = u.clone();
            r.extend_from_slice(u);
            rows.push(r);
        }
        for v in &other.rows {
            let mut r = v.clone();
            r.extend(std::iter::repeat(0).take(d));
            rows.push(r);
        }
        let h = howell(self.zn, rows, 2 * d);
        let gens = h
            .into_iter()
            .filter(|r| is_zero_vec(&r[..d]))
            .map(|r| r[d..].to_vec());
        Submodule::span(self.zn, d, gens)
    }

    /// Number of elements as a product of m/pivot factors.
    pub fn order(&self) -> u128 {
        self.rows
            .iter()
            .map(|r| (self.zn.m / self.pivot(r).1) as u128)
            .fold(1u128, |a, b| a.saturating_mul(b))
    }

    /// All elements, each once, in mixed-radix order of Howell coefficients.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let radices: Vec<u64> = self
            .rows
            .iter()
            .map(|r| self.zn.m / self.pivot(r).1)
            .collect();
        let mut out = Vec::new();
        let mut coeff = vec![0u64; radices.len()];
        loop {
            let mut v = vec![0; self.dim];
            for (c, row) in coeff.iter().zip(&self.rows) {
                self.zn.add_assign_scaled(&mut v, *c, row);
            }
            out.push(v);
            let mut i = 0;
            loop {
                if i == coeff.len() {
                    return out;
                }
                coeff[i] += 1;
                if coeff[i] < radices[i] {
                    break;
                }
                coeff[i] = 0;
                i += 1;
            }
        }
    }

    /// F_p-basis (rows) of the p-torsion {u : p u = 0} of this submodule.
    pub fn p_torsion_basis(&self, p: u64) -> Vec<Vec<u64>> {
        let m = self.zn.m;
        debug_assert_eq!(m % p, 0);
        let scaled: Vec<Vec<u64>> = (0..self.dim)
            .map(|i| {
                let mut v = vec![0; self.dim];
                v[i] = m / p;
                v
            })
            .collect();
        let tor = Submodule::span(self.zn, self.dim, scaled);
        self.intersect(&tor).rows
    }

    /// Size of the union of projective p-torsion candidate sets over primes p | m.
    pub fn candidate_count(&self) -> u128 {
        self.zn
            .primes()
            .into_iter()
            .map(|p| {
                let d = self.p_torsion_basis(p).len() as u32;
                (p as u128).saturating_pow(d).saturating_sub(1) / (p as u128 - 1)
            })
            .sum()
    }

    /// Nonzero p-torsion elements up to F_p-scalars, for every prime p | m, in a
    /// fixed order. Every nonzero submodule of this one contains a unit multiple of one.
    pub fn torsion_candidates(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for p in self.zn.primes() {
            let basis = self.p_torsion_basis(p);
            let d = basis.len();
            for lead in 0..d {
                let free = d - lead - 1;
                let total = (p as u128).pow(free as u32);
                for idx in 0..total {
                    let mut v = basis[lead].clone();
                    let mut rest = idx;
                    for j in (lead + 1)..d {
                        let c = (rest % p as u128) as u64;
                        rest /= p as u128;
                        self.zn.add_assign_scaled(&mut v, c, &basis[j]);
                    }
                    out.push(v);
                }
            }
        }
        out
    }

    /// First nonzero prime-order element in a fixed order, if any.
    pub fn first_torsion(&self) -> Option<Vec<u64>> {
        self.zn
            .primes()
            .into_iter()
            .find_map(|p| self.p_torsion_basis(p).into_iter().next())
    }

    /// Keeps only the listed coordinates (others zeroed); image of the projection.
    pub fn project(&self, keep: &[bool]) -> Submodule {
        Submodule::span(
            self.zn,
            self.dim,
            self.rows.iter().map(|r| {
                r.iter()
                    .zip(keep)
                    .map(|(&x, &k)| if k { x } else { 0 })
                    .collect()
            }),
        )
    }
}

/// Incrementally grown submodule; cheap when most inserted vectors are members.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    sub: Submodule,
}

impl SpanBuilder {
    pub fn new(zn: Zn, dim: usize) -> Self {
        SpanBuilder {
            sub: Submodule::zero(zn, dim),
        }
    }

    pub fn from(sub: Submodule) -> Self {
        SpanBuilder { sub }
    }

    /// Returns true when v enlarged the span.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        if self.sub.contains(&v) {
            return false;
        }
        let mut rows = self.sub.rows.clone();
        rows.push(v);
        self.sub.rows = howell(self.sub.zn, rows, self.sub.dim);
        true
    }

    pub fn current(&self) -> &Submodule {
        &self.sub
    }

    pub fn finish(self) -> Submodule {
        self.sub
    }
}

/// Kernel of x -> sum_i x_i images[i], as a submodule of (Z/m)^{images.len()}.
pub fn kernel(zn: Zn, images: &[Vec<u64>], ncols: usize) -> Submodule {
    let k = images.len();
    let rows: Vec<Vec<u64>> = images
        .iter()
        .enumerate()
        .map(|(i, img)| {
            let mut r = img.clone();
            r.extend((0..k).map(|j| (i == j) as u64));
            r
        })
        .collect();
    let h = howell(zn, rows, ncols + k);
    Submodule::span(
        zn,
        k,
        h.into_iter()
            .filter(|r| is_zero_vec(&r[..ncols]))
            .map(|r| r[ncols..].to_vec()),
    )
}

/// Some x with sum_i x_i mat[i] = target, if one exists.
pub fn solve_left(zn: Zn, mat: &[Vec<u64>], target: &[u64]) -> Option<Vec<u64>> {
    let t = mat.len();
    let n = target.len();
    let rows: Vec<Vec<u64>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..t).map(|j| (i == j) as u64));
            r
        })
        .collect();
    let h = howell(zn, rows, n + t);
    let mut v = target.to_vec();
    v.extend(std::iter::repeat(0).take(t));
    for row in &h {
        let c = leading(row).expect("nonzero");
        if c >= n {
            break;
        }
        let g = row[c];
        let q = v[c] / g;
        if q != 0 {
            zn.add_assign_scaled(&mut v, zn.neg(q), row);
        }
    }
    if !is_zero_vec(&v[..n]) {
        return None;
    }
    Some(v[n..].iter().map(|&x| zn.neg(x)).collect())
}
