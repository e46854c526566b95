//! Points and lines of the `p × p` grid over `Z_p`.
//!
//! Label `i` sits at `⟨(i−1) div p, (i−1) mod p⟩`. A line `L_{a,b}` with
//! direction `a ∈ 0..=p` and offset `b ∈ 0..p` is the vertical line `x ≡ b`
//! when `a = p`, and `y ≡ a·x + b (mod p)` otherwise.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::Label;

pub fn is_prime(m: usize) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn smallest_prime_geq(m: usize) -> usize {
    (m.max(2)..)
        .find(|&c| is_prime(c))
        .expect("primes are unbounded")
}

/// Integer `⌈√n⌉`.
pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Grid prime for `n` nodes: the smallest prime `≥ ⌈√n⌉`.
pub fn grid_prime(n: usize) -> usize {
    smallest_prime_geq(ceil_sqrt(n))
}

pub fn point_of_label(i: Label, p: usize) -> Result<(usize, usize)> {
    if i == 0 || i > p * p {
        return Err(Error::InvalidLabel {
            label: i,
            max: p * p,
        });
    }
    Ok(((i - 1) / p, (i - 1) % p))
}

pub fn label_of_point(x: usize, y: usize, p: usize) -> Label {
    x * p + y + 1
}

pub fn on_line(a: usize, b: usize, p: usize, (x, y): (usize, usize)) -> bool {
    if a == p {
        x % p == b
    } else {
        y % p == (a * x + b) % p
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub direction: usize,
    pub offset: usize,
    /// Labels in `1..=n` whose point lies on the line, ascending.
    pub members: Vec<Label>,
}

/// Grid points of `L_{a,b}` in ascending label order; always `p` of them.
pub fn line_points(a: usize, b: usize, p: usize) -> Vec<(usize, usize)> {
    let mut pts: Vec<(usize, usize)> = if a == p {
        (0..p).map(|y| (b, y)).collect()
    } else {
        (0..p).map(|x| (x, (a * x + b) % p)).collect()
    };
    pts.sort_unstable();
    pts
}

pub fn line_members(a: usize, b: usize, p: usize, n: usize) -> Result<Line> {
    if p == 0 || a > p || b >= p {
        return Err(Error::InvalidLine { a, b, p });
    }
    let members = line_points(a, b, p)
        .into_iter()
        .map(|(x, y)| label_of_point(x, y, p))
        .filter(|&i| i <= n)
        .collect();
    Ok(Line {
        direction: a,
        offset: b,
        members,
    })
}

/// Outcome of checking one incidence property over the full grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometryReport {
    pub p: usize,
    pub line_count: usize,
    pub properties: Vec<PropertyCheck>,
}

impl GeometryReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|c| c.passed)
    }
}

/// Exhaustively checks the five incidence properties of the line system for
/// a prime `p`: `p(p+1)` distinct lines; `p+1` lines through each point, one
/// per direction; each direction partitions the grid; lines of different
/// directions meet in exactly one point; two distinct points share exactly
/// one line.
pub fn verify_line_properties(p: usize) -> Result<GeometryReport> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(check_line_properties(p))
}

/// The same checks without the primality gate. Composite moduli fail the
/// intersection properties; this is exposed so that can be observed.
pub fn check_line_properties(p: usize) -> GeometryReport {
    let cells = p * p;
    let lines: Vec<(usize, usize, Vec<usize>)> = (0..=p)
        .flat_map(|a| (0..p).map(move |b| (a, b)))
        .map(|(a, b)| {
            let cells: Vec<usize> = line_points(a, b, p)
                .into_iter()
                .map(|(x, y)| x * p + y)
                .collect();
            (a, b, cells)
        })
        .collect();
    let sets: Vec<HashSet<usize>> = lines
        .iter()
        .map(|(_, _, c)| c.iter().copied().collect())
        .collect();

    let distinct: HashSet<Vec<usize>> = lines.iter().map(|(_, _, c)| c.clone()).collect();
    let expected = p * (p + 1);
    let count_ok = distinct.len() == expected && lines.len() == expected;

    let mut per_point_ok = true;
    let mut per_point_detail = String::new();
    for cell in 0..cells {
        let dirs: Vec<usize> = lines
            .iter()
            .zip(&sets)
            .filter(|(_, s)| s.contains(&cell))
            .map(|((a, _, _), _)| *a)
            .collect();
        let mut unique = dirs.clone();
        unique.dedup();
        if dirs.len() != p + 1 || unique.len() != p + 1 {
            per_point_ok = false;
            per_point_detail = format!("cell {cell} lies on {} lines", dirs.len());
            break;
        }
    }

    let mut partition_ok = true;
    let mut partition_detail = String::new();
    for a in 0..=p {
        let mut cover = vec![0usize; cells];
        for (_, _, c) in lines.iter().filter(|(d, _, _)| *d == a) {
            for &cell in c {
                cover[cell] += 1;
            }
        }
        if let Some(cell) = cover.iter().position(|&c| c != 1) {
            partition_ok = false;
            partition_detail = format!("direction {a} covers cell {cell} {} times", cover[cell]);
            break;
        }
    }

    let mut meet_ok = true;
    let mut meet_detail = String::new();
    'outer: for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if lines[i].0 == lines[j].0 {
                continue;
            }
            let common = sets[i].intersection(&sets[j]).count();
            if common != 1 {
                meet_ok = false;
                meet_detail = format!(
                    "L({},{}) and L({},{}) share {common} points",
                    lines[i].0, lines[i].1, lines[j].0, lines[j].1
                );
                break 'outer;
            }
        }
    }

    let mut pair_ok = true;
    let mut pair_detail = String::new();
    'pairs: for u in 0..cells {
        for v in u + 1..cells {
            let shared = sets
                .iter()
                .filter(|s| s.contains(&u) && s.contains(&v))
                .count();
            if shared != 1 {
                pair_ok = false;
                pair_detail = format!("cells {u} and {v} share {shared} lines");
                break 'pairs;
            }
        }
    }

    GeometryReport {
        p,
        line_count: distinct.len(),
        properties: vec![
            PropertyCheck {
                name: "line-count",
                passed: count_ok,
                detail: format!("{} distinct lines, expected {expected}", distinct.len()),
            },
            PropertyCheck {
                name: "lines-per-point",
                passed: per_point_ok,
                detail: per_point_detail,
            },
            PropertyCheck {
                name: "direction-partition",
                passed: partition_ok,
                detail: partition_detail,
            },
            PropertyCheck {
                name: "single-intersection",
                passed: meet_ok,
                detail: meet_detail,
            },
            PropertyCheck {
                name: "unique-common-line",
                passed: pair_ok,
                detail: pair_detail,
            },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_prime_geq(m: usize) -> usize {
        let mut c = m.max(2);
        loop {
            if (2..c).all(|d| !c.is_multiple_of(d)) {
                return c;
            }
            c += 1;
        }
    }

    #[test]
    fn primes_against_trial_division() {
        assert_eq!(smallest_prime_geq(3), 3);
        assert_eq!(smallest_prime_geq(4), 5);
        assert_eq!(smallest_prime_geq(1), 2);
        for m in 1..500 {
            assert_eq!(smallest_prime_geq(m), trial_division_prime_geq(m), "m={m}");
        }
    }

    #[test]
    fn ceil_sqrt_exact() {
        for n in 1..5000usize {
            let r = ceil_sqrt(n);
            assert!(r * r >= n && (r - 1) * (r - 1) < n, "n={n}");
        }
    }

    #[test]
    fn label_points_with_shift() {
        assert_eq!(point_of_label(1, 3).unwrap(), (0, 0));
        assert_eq!(point_of_label(9, 3).unwrap(), (2, 2));
        assert_eq!(point_of_label(5, 3).unwrap(), (1, 1));
        assert!(point_of_label(10, 3).is_err());
        assert!(point_of_label(0, 3).is_err());
    }

    #[test]
    fn line_examples() {
        assert_eq!(line_members(0, 1, 3, 9).unwrap().members, vec![2, 5, 8]);
        assert_eq!(line_members(3, 0, 3, 9).unwrap().members, vec![1, 2, 3]);
        assert_eq!(line_members(0, 1, 3, 4).unwrap().members, vec![2]);
        assert!(matches!(
            line_members(4, 0, 3, 9),
            Err(Error::InvalidLine { .. })
        ));
        assert!(line_members(0, 3, 3, 9).is_err());
    }

    #[test]
    fn geometry_small_primes() {
        for p in [2, 3, 5, 7] {
            let r = verify_line_properties(p).unwrap();
            assert_eq!(r.line_count, p * (p + 1));
            assert!(r.all_passed(), "{r:?}");
        }
        assert_eq!(verify_line_properties(3).unwrap().line_count, 12);
        assert_eq!(verify_line_properties(5).unwrap().line_count, 30);
    }

    #[test]
    fn composite_rejected_and_fails() {
        assert_eq!(verify_line_properties(4), Err(Error::InvalidPrime(4)));
        let r = check_line_properties(4);
        assert!(!r.properties[3].passed || !r.properties[4].passed);
    }
}
