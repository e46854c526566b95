use std::collections::HashMap;

use crate::error::{Error, Result};

/// Minimum height of a k-shot transmission tree over `a` ids, by exhaustive
/// search over every split of every id set. Only nodes with a transmitting
/// child are enumerated: replacing a left-only node by its child never makes
/// a tree taller.
pub fn min_tree_height_bruteforce(a: usize, k: usize) -> Result<usize> {
    if a > 12 || k > 3 {
        return Err(Error::TooLarge(format!(
            "a={a}, k={k}; exhaustive search is limited to a ≤ 12, k ≤ 3"
        )));
    }
    if a <= 1 {
        return Ok(0);
    }
    let mut memo = HashMap::new();
    let full = (1u32 << a) - 1;
    Ok(search(full, k, &mut memo).expect("a k ≥ 1 tree always exists"))
}

fn search(
    mask: u32,
    rights: usize,
    memo: &mut HashMap<(u32, usize), Option<usize>>,
) -> Option<usize> {
    if mask.count_ones() <= 1 {
        return Some(0);
    }
    if rights == 0 {
        return None;
    }
    if let Some(&h) = memo.get(&(mask, rights)) {
        return h;
    }
    let mut best: Option<usize> = None;
    // every nonempty transmitting subset
    let mut sub = mask;
    while sub != 0 {
        let rest = mask & !sub;
        let right = search(sub, rights - 1, memo);
        let left = if rest == 0 {
            Some(0)
        } else {
            search(rest, rights, memo)
        };
        if let (Some(r), Some(l)) = (right, left) {
            let h = 1 + r.max(l);
            best = Some(best.map_or(h, |b| b.min(h)));
        }
        sub = (sub - 1) & mask;
    }
    memo.insert((mask, rights), best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::counting_height;

    #[test]
    fn one_shot_is_linear() {
        for a in 2..=8 {
            assert_eq!(min_tree_height_bruteforce(a, 1).unwrap(), a - 1);
        }
    }

    #[test]
    fn small_values() {
        assert_eq!(min_tree_height_bruteforce(4, 2).unwrap(), 2);
        for k in 1..=3 {
            assert_eq!(min_tree_height_bruteforce(2, k).unwrap(), 1);
            assert_eq!(min_tree_height_bruteforce(1, k).unwrap(), 0);
        }
        assert!(matches!(
            min_tree_height_bruteforce(13, 1),
            Err(Error::TooLarge(_))
        ));
        assert!(matches!(
            min_tree_height_bruteforce(5, 4),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn at_least_counting_bound() {
        for k in 1..=3 {
            for a in 1..=9 {
                assert!(min_tree_height_bruteforce(a, k).unwrap() >= counting_height(a, k));
            }
        }
    }
}
