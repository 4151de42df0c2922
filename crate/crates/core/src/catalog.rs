//! Built-in named groups.
//!
//! Grammar: `trivial`, `C{n}`, `D{2n}` (dihedral of order 2n), `S{n}`, `A{n}`,
//! `V4`, `Q8`, `E(p,k)` (elementary abelian of order p^k; `E{p,k}` and
//! `Ep,k` also parse), and direct products joined by `×` (or `x`, `*`).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{direct_product, trivial_group, FiniteGroup, DEFAULT_ORDER_CAP};

/// Catalog groups of order at most 24 exercised by the verification suite.
pub const SMALL_CATALOG: &[&str] = &[
    "trivial", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12", "V4", "S3",
    "D8", "Q8", "D10", "A4", "D12", "C2×C4", "E(2,3)", "C3×C3", "C2×C6", "D16", "C4×C4",
    "C2×D8", "C2×Q8", "C3×S3", "D20", "S4", "C2×A4", "D24",
];

pub fn catalog_group(name: &str) -> Result<FiniteGroup> {
    catalog_group_with_cap(name, DEFAULT_ORDER_CAP)
}

pub fn catalog_group_with_cap(name: &str, cap: usize) -> Result<FiniteGroup> {
    let name = name.trim();
    let factors: Vec<&str> = name
        .split(['×', '*', 'x'])
        .map(str::trim)
        .collect();
    if factors.len() > 1 {
        let mut acc: Option<Arc<FiniteGroup>> = None;
        for f in &factors {
            let g = Arc::new(atom(f, cap)?);
            acc = Some(match acc {
                None => g,
                Some(a) => direct_product(&a, &g, cap)?.group,
            });
        }
        let g = Arc::try_unwrap(acc.expect("at least two factors")).unwrap_or_else(|a| (*a).clone());
        return Ok(g.with_name(factors.join("×")));
    }
    atom(name, cap)
}

fn parse_num(s: &str, name: &str) -> Result<usize> {
    s.parse::<usize>().map_err(|_| Error::UnknownName(name.to_string()))
}

fn atom(name: &str, cap: usize) -> Result<FiniteGroup> {
    let unknown = || Error::UnknownName(name.to_string());
    let too_large = |size: usize| Error::TooLarge {
        what: "catalog group",
        size,
        cap,
    };
    if name.is_empty() {
        return Err(unknown());
    }
    if name == "trivial" || name == "e" || name == "1" {
        return Ok(trivial_group());
    }
    if name == "V4" {
        let c2 = Arc::new(cyclic(2));
        let v = direct_product(&c2, &c2, cap)?;
        return Ok((*v.group).clone().with_name("V4"));
    }
    if name == "Q8" {
        if cap < 8 {
            return Err(too_large(8));
        }
        return Ok(quaternion().with_name("Q8"));
    }

    let mut chars = name.chars();
    let head = chars.next();
    let rest = chars.as_str();
    let g = match head {
        Some('C') => {
            let n = parse_num(rest, name)?;
            if n == 0 {
                return Err(unknown());
            }
            if n > cap {
                return Err(too_large(n));
            }
            cyclic(n)
        }
        Some('D') => {
            let m = parse_num(rest, name)?;
            if m == 0 || m % 2 != 0 {
                return Err(unknown());
            }
            if m > cap {
                return Err(too_large(m));
            }
            dihedral(m / 2)
        }
        Some('S') => {
            let n = parse_num(rest, name)?;
            symmetric(n, cap)?
        }
        Some('A') => {
            let n = parse_num(rest, name)?;
            alternating(n, cap)?
        }
        Some('E') => {
            let inner = rest
                .trim_start_matches(['(', '{'])
                .trim_end_matches([')', '}']);
            let (p, k) = inner.split_once(',').ok_or_else(unknown)?;
            let p = parse_num(p.trim(), name)?;
            let k = parse_num(k.trim(), name)? as u32;
            if p < 2 || (2..p).any(|d| p % d == 0) {
                return Err(unknown());
            }
            match p.checked_pow(k) {
                Some(order) if order <= cap => {}
                Some(order) => return Err(too_large(order)),
                None => return Err(too_large(usize::MAX)),
            }
            let cp = Arc::new(cyclic(p));
            let mut acc = Arc::new(trivial_group());
            for _ in 0..k {
                acc = direct_product(&acc, &cp, cap)?.group;
            }
            (*acc).clone()
        }
        _ => return Err(unknown()),
    };
    Ok(g.with_name(name))
}

fn cyclic(n: usize) -> FiniteGroup {
    let mul = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
    FiniteGroup::from_flat_table(n, mul).expect("cyclic table")
}

/// Dihedral group of order `2n`; element `a + n·b` is `r^a s^b`.
fn dihedral(n: usize) -> FiniteGroup {
    let m = 2 * n;
    let mut mul = Vec::with_capacity(m * m);
    for x in 0..m {
        let (a, b) = (x % n, x / n);
        for y in 0..m {
            let (c, d) = (y % n, y / n);
            let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
            mul.push(rot + n * (b ^ d));
        }
    }
    FiniteGroup::from_flat_table(m, mul).expect("dihedral table")
}

fn symmetric(n: usize, cap: usize) -> Result<FiniteGroup> {
    if n <= 1 {
        return Ok(trivial_group());
    }
    let mut gens = vec![];
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    gens.push(swap);
    if n > 2 {
        gens.push((0..n).map(|i| (i + 1) % n).collect());
    }
    FiniteGroup::from_permutations(n, &gens, cap)
}

fn alternating(n: usize, cap: usize) -> Result<FiniteGroup> {
    if n <= 2 {
        return Ok(trivial_group());
    }
    let gens: Vec<Vec<usize>> = (2..n)
        .map(|i| {
            // 3-cycle (0 1 i)
            let mut p: Vec<usize> = (0..n).collect();
            p[0] = 1;
            p[1] = i;
            p[i] = 0;
            p
        })
        .collect();
    FiniteGroup::from_permutations(n, &gens, cap)
}

/// Quaternion group; element `2u + s` is `(-1)^s · unit[u]` with units 1, i, j, k.
fn quaternion() -> FiniteGroup {
    // unit products: (index, sign)
    const T: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    let mut mul = Vec::with_capacity(64);
    for x in 0..8 {
        for y in 0..8 {
            let (u, s) = (x / 2, x % 2);
            let (v, t) = (y / 2, y % 2);
            let (w, r) = T[u][v];
            mul.push(2 * w + (s ^ t ^ r));
        }
    }
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
    FiniteGroup::from_flat_table(8, mul)
        .expect("quaternion table")
        .with_labels(labels.iter().map(|s| s.to_string()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        for (name, order) in [
            ("trivial", 1),
            ("C1", 1),
            ("C7", 7),
            ("D2", 2),
            ("D8", 8),
            ("S3", 6),
            ("S4", 24),
            ("A4", 12),
            ("A5", 60),
            ("V4", 4),
            ("Q8", 8),
            ("E(2,3)", 8),
            ("E{3,2}", 9),
            ("C2×C4", 8),
            ("C2xC2xC2", 8),
        ] {
            assert_eq!(catalog_group(name).unwrap().order(), order, "{name}");
        }
    }

    #[test]
    fn structure() {
        let v4 = catalog_group("V4").unwrap();
        assert!((1..4).all(|x| v4.element_order(x) == 2));
        let q8 = catalog_group("Q8").unwrap();
        assert_eq!(q8.elements().filter(|&x| q8.element_order(x) == 2).count(), 1);
        assert!(!q8.is_abelian());
        let d8 = catalog_group("D8").unwrap();
        assert_eq!(d8.elements().filter(|&x| d8.element_order(x) == 2).count(), 5);
        assert!(!d8.is_abelian());
        assert_eq!(catalog_group("E(2,3)").unwrap().exponent(), 2);
        assert_eq!(catalog_group("S3").unwrap().exponent(), 6);
        assert_eq!(catalog_group("A4").unwrap().exponent(), 6);
    }

    #[test]
    fn deterministic() {
        for name in SMALL_CATALOG {
            let a = catalog_group(name).unwrap();
            let b = catalog_group(name).unwrap();
            assert_eq!(a.cayley_table(), b.cayley_table());
            assert!(a.order() <= 24, "{name}");
        }
    }

    #[test]
    fn unknown_names_and_caps() {
        for bad in ["", "Z5", "D7", "C0", "E(4,2)", "Cx", "V5"] {
            assert!(matches!(catalog_group(bad), Err(Error::UnknownName(_))), "{bad}");
        }
        assert!(matches!(catalog_group("S7"), Err(Error::TooLarge { .. })));
        assert!(matches!(catalog_group_with_cap("C20", 10), Err(Error::TooLarge { .. })));
    }
}
