//! Small library of named permutation groups.
//!
//! Names: `Cn`, `Sn`, `An`, `Dn` (dihedral of order `n`), `Q8`, `V4`,
//! `SL(2,p)`, `PSL(2,p)`, and direct products written `AxB`.

use crate::error::{Error, Result};
use crate::group::{direct_product, is_prime, Mode, PermGroup};
use crate::perm::Permutation;

fn perm(images: Vec<u32>) -> Permutation {
    Permutation::from_images(images).expect("library generators are bijections")
}

pub fn cyclic(n: usize, mode: Mode) -> Result<PermGroup> {
    if n == 0 {
        return Err(Error::UnknownGroup("C0".into()));
    }
    let gens = if n == 1 {
        Vec::new()
    } else {
        vec![perm((0..n as u32).map(|i| (i + 1) % n as u32).collect())]
    };
    PermGroup::new(n, gens, mode)
}

pub fn symmetric(n: usize, mode: Mode) -> Result<PermGroup> {
    if n == 0 {
        return Err(Error::UnknownGroup("S0".into()));
    }
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Permutation::from_cycles(n, &[&(0..n as u32).collect::<Vec<_>>()])?);
        gens.push(Permutation::from_cycles(n, &[&[0, 1]])?);
    }
    PermGroup::new(n, gens, mode)
}

pub fn alternating(n: usize, mode: Mode) -> Result<PermGroup> {
    if n == 0 {
        return Err(Error::UnknownGroup("A0".into()));
    }
    let gens = (2..n as u32)
        .map(|i| Permutation::from_cycles(n, &[&[0, 1, i]]))
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new(n, gens, mode)
}

/// Dihedral group of order `order` acting on `order / 2` points.
pub fn dihedral(order: usize, mode: Mode) -> Result<PermGroup> {
    if order < 6 || order % 2 != 0 {
        return Err(Error::UnknownGroup(format!("D{order}")));
    }
    let m = order / 2;
    let rotation = perm((0..m as u32).map(|i| (i + 1) % m as u32).collect());
    let reflection = perm((0..m as u32).map(|i| (m as u32 - i) % m as u32).collect());
    PermGroup::new(m, vec![rotation, reflection], mode)
}

pub fn klein_four(mode: Mode) -> Result<PermGroup> {
    PermGroup::new(
        4,
        vec![
            Permutation::from_cycles(4, &[&[0, 1], &[2, 3]])?,
            Permutation::from_cycles(4, &[&[0, 2], &[1, 3]])?,
        ],
        mode,
    )
}

/// Quaternion group in its regular representation. Point `2*b + s` is the
/// unit `(-1)^s * e_b` with `e_0..e_3 = 1, i, j, k`.
pub fn quaternion(mode: Mode) -> Result<PermGroup> {
    // e_a * e_b = sign * e_c
    fn basis_mul(a: u32, b: u32) -> (u32, u32) {
        match (a, b) {
            (0, x) | (x, 0) => (0, x),
            (x, y) if x == y => (1, 0),
            (1, 2) => (0, 3),
            (2, 1) => (1, 3),
            (2, 3) => (0, 1),
            (3, 2) => (1, 1),
            (3, 1) => (0, 2),
            (1, 3) => (1, 2),
            _ => unreachable!(),
        }
    }
    let right_mul = |b: u32| {
        perm(
            (0..8u32)
                .map(|x| {
                    let (sign, c) = basis_mul(x / 2, b);
                    2 * c + ((x % 2) ^ sign)
                })
                .collect(),
        )
    };
    PermGroup::new(8, vec![right_mul(1), right_mul(2)], mode)
}

fn require_prime(p: u64, name: &str) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::UnknownGroup(format!("{name}: {p} is not prime")))
    }
}

/// `SL(2,p)` acting on the nonzero row vectors of `F_p^2`; the vector
/// `(a, b)` is point `a*p + b - 1`.
pub fn special_linear_2(p: u64, mode: Mode) -> Result<PermGroup> {
    require_prime(p, "SL(2,p)")?;
    let p = p as u32;
    let degree = (p * p - 1) as usize;
    let act = |m: [u32; 4]| {
        perm(
            (1..p * p)
                .map(|v| {
                    let (a, b) = (v / p, v % p);
                    let x = (a * m[0] + b * m[2]) % p;
                    let y = (a * m[1] + b * m[3]) % p;
                    x * p + y - 1
                })
                .collect(),
        )
    };
    let gens = vec![act([1, 1, 0, 1]), act([0, 1, p - 1, 0])];
    PermGroup::new(degree, gens, mode)
}

/// `PSL(2,p)` acting on the projective line; point `p` is infinity.
pub fn projective_special_linear_2(p: u64, mode: Mode) -> Result<PermGroup> {
    require_prime(p, "PSL(2,p)")?;
    let inv = |x: u64| (1..p).find(|y| x * y % p == 1).unwrap();
    let shift = perm((0..=p).map(|x| if x == p { p } else { (x + 1) % p } as u32).collect());
    let flip = perm(
        (0..=p)
            .map(|x| match x {
                0 => p,
                x if x == p => 0,
                x => (p - inv(x)) % p,
            } as u32)
            .collect(),
    );
    PermGroup::new(p as usize + 1, vec![shift, flip], mode)
}

fn parse_number(s: &str, name: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::UnknownGroup(name.to_string()))
}

/// Looks up a group by name.
pub fn named_group(name: &str, mode: Mode) -> Result<PermGroup> {
    let name = name.trim();
    if name.contains('x') {
        let mut factors = name.split('x');
        let first = named_group(factors.next().unwrap(), mode)?;
        return factors.try_fold(first, |acc, f| direct_product(&acc, &named_group(f, mode)?));
    }
    if let Some(rest) = name.strip_prefix("SL(2,").and_then(|r| r.strip_suffix(')')) {
        return special_linear_2(parse_number(rest, name)? as u64, mode);
    }
    if let Some(rest) = name.strip_prefix("PSL(2,").and_then(|r| r.strip_suffix(')')) {
        return projective_special_linear_2(parse_number(rest, name)? as u64, mode);
    }
    match name {
        "Q8" => return quaternion(mode),
        "V4" => return klein_four(mode),
        _ => {}
    }
    let unknown = || Error::UnknownGroup(name.to_string());
    let (kind, digits) = name.split_at(name.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?);
    let n = parse_number(digits, name)?;
    match kind {
        "C" => cyclic(n, mode),
        "S" => symmetric(n, mode),
        "A" => alternating(n, mode),
        "D" => dihedral(n, mode),
        _ => Err(unknown()),
    }
}
