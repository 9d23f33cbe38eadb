use std::fmt;

use serde::{Deserialize, Serialize};

use super::linearizable::{multisets, LinearizableProblem};
use crate::gadgets::BipartiteInstance;
use crate::lcl::Violation;

/// The two bits a white node outputs on one incident edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bits {
    pub x: bool,
    pub y: bool,
}

impl Bits {
    pub fn new(x: bool, y: bool) -> Self {
        Bits { x, y }
    }
}

/// Σ of the linearizable encoding of iterated GHZ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GhzLabel {
    First { y: bool },
    Other { x: bool, y: bool },
}

impl GhzLabel {
    pub const ALL: [GhzLabel; 6] = [
        GhzLabel::First { y: false },
        GhzLabel::First { y: true },
        GhzLabel::Other { x: false, y: false },
        GhzLabel::Other { x: false, y: true },
        GhzLabel::Other { x: true, y: false },
        GhzLabel::Other { x: true, y: true },
    ];

    /// (ℓ, x, y) with x = 0 for first labels.
    pub fn parts(self) -> (bool, bool, bool) {
        match self {
            GhzLabel::First { y } => (true, false, y),
            GhzLabel::Other { x, y } => (false, x, y),
        }
    }

    pub fn y(self) -> bool {
        self.parts().2
    }
}

impl fmt::Display for GhzLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GhzLabel::First { y } => write!(f, "(first,{})", u8::from(y)),
            GhzLabel::Other { x, y } => write!(f, "(other,{},{})", u8::from(x), u8::from(y)),
        }
    }
}

/// Black rule of iterated GHZ on three (first?, x, y) triples.
fn game_ok(t: [(bool, bool, bool); 3]) -> bool {
    if t.iter().all(|p| p.0) {
        let ones = t.iter().filter(|p| p.2).count();
        return ones == 1;
    }
    let xs = t.iter().filter(|p| p.1).count();
    if xs % 2 == 1 {
        return true;
    }
    let xor = t.iter().fold(false, |a, p| a ^ p.2);
    let or = t.iter().any(|p| p.1);
    xor == or
}

/// Iterated GHZ as (Σ, (F, L, P), B). Black nodes of degree other than 3
/// are unconstrained, so every multiset of size below 3 is in B.
pub fn iterghz_as_linearizable() -> LinearizableProblem<GhzLabel> {
    let sigma = GhzLabel::ALL.to_vec();
    let first = sigma.iter().copied().filter(|l| matches!(l, GhzLabel::First { .. })).collect();
    let last = sigma.iter().copied().collect();
    let mut pairs = std::collections::BTreeSet::new();
    for &a in &sigma {
        for &b in &sigma {
            if let GhzLabel::Other { x: x2, .. } = b {
                if a.y() == x2 {
                    pairs.insert((a, b));
                }
            }
        }
    }
    let mut black = std::collections::BTreeSet::new();
    for k in 0..3 {
        black.extend(multisets(&sigma, k));
    }
    for m in multisets(&sigma, 3) {
        if game_ok([m[0].parts(), m[1].parts(), m[2].parts()]) {
            black.insert(m);
        }
    }
    LinearizableProblem { sigma, first, last, pairs, black, rank: 3 }
}

/// Violations of an iterated GHZ output given per edge. Whites report as
/// node `w`, blacks as `whites + b`.
pub fn check_iterghz(b: &BipartiteInstance, out: &[Bits]) -> Vec<Violation> {
    let mut res = Vec::new();
    for (w, order) in b.order.iter().enumerate() {
        if let Some(&e) = order.first() {
            if out[e].x {
                res.push(Violation::new(w, "iterghz.first", "x(u,1) = 1"));
            }
        }
        for (i, p) in order.windows(2).enumerate() {
            if out[p[0]].y != out[p[1]].x {
                res.push(Violation::new(w, "iterghz.chain", format!("y(u,{}) != x(u,{})", i + 1, i + 2)));
            }
        }
    }
    let pos = b.positions();
    for k in 0..b.blacks {
        let es = b.black_edges(k);
        if es.len() != 3 {
            continue;
        }
        let t = [0, 1, 2].map(|i| {
            let e = es[i];
            (pos[e] == 1, out[e].x, out[e].y)
        });
        if !game_ok(t) {
            let c = if t.iter().all(|p| p.0) { "iterghz.lucky" } else { "iterghz.game" };
            res.push(Violation::new(b.whites + k, c, format!("{:?}", es.iter().map(|&e| out[e]).collect::<Vec<_>>())));
        }
    }
    res
}

/// Per-edge bits → Σ labels (first label at σ position 1).
pub fn bits_to_labels(b: &BipartiteInstance, out: &[Bits]) -> Vec<GhzLabel> {
    let pos = b.positions();
    out.iter()
        .zip(pos)
        .map(|(o, p)| if p == 1 { GhzLabel::First { y: o.y } } else { GhzLabel::Other { x: o.x, y: o.y } })
        .collect()
}

pub fn labels_to_bits(sol: &[GhzLabel]) -> Vec<Bits> {
    sol.iter()
        .map(|l| {
            let (_, x, y) = l.parts();
            Bits { x, y }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn first(y: u8) -> GhzLabel {
        GhzLabel::First { y: y == 1 }
    }
    fn other(x: u8, y: u8) -> GhzLabel {
        GhzLabel::Other { x: x == 1, y: y == 1 }
    }

    #[test]
    fn pair_membership() {
        let p = iterghz_as_linearizable();
        assert!(p.allows_pair(&first(1), &other(1, 0)));
        assert!(!p.allows_pair(&first(0), &other(1, 1)));
        assert!(!p.allows_pair(&other(0, 0), &first(0)));
        assert_eq!(p.pairs.len(), 12);
    }

    #[test]
    fn black_membership() {
        let p = iterghz_as_linearizable();
        assert!(p.allows_black(&[first(0), first(0), first(1)]));
        assert!(!p.allows_black(&[first(0), first(1), first(1)]));
        // x = (0,1,1): even, OR = 1, needs odd y-parity.
        assert!(p.allows_black(&[first(1), other(1, 0), other(1, 0)]));
        assert!(!p.allows_black(&[first(0), other(1, 1), other(1, 1)]));
        // odd x-sum: anything.
        assert!(p.allows_black(&[other(1, 0), other(0, 0), other(0, 0)]));
    }

    #[test]
    fn black_set_matches_direct_count() {
        // Independent count over all 6^3 ordered triples, deduplicated.
        let p = iterghz_as_linearizable();
        let mut seen = std::collections::BTreeSet::new();
        for a in GhzLabel::ALL {
            for b in GhzLabel::ALL {
                for c in GhzLabel::ALL {
                    let (la, xa, ya) = a.parts();
                    let (lb, xb, yb) = b.parts();
                    let (lc, xc, yc) = c.parts();
                    let ok = if la && lb && lc {
                        u8::from(ya) + u8::from(yb) + u8::from(yc) == 1
                    } else if (u8::from(xa) + u8::from(xb) + u8::from(xc)) % 2 == 0 {
                        (ya ^ yb ^ yc) == (xa | xb | xc)
                    } else {
                        true
                    };
                    if ok {
                        let mut m = vec![a, b, c];
                        m.sort();
                        seen.insert(m);
                    }
                }
            }
        }
        let threes: std::collections::BTreeSet<Vec<GhzLabel>> =
            p.black.iter().filter(|m| m.len() == 3).cloned().collect();
        assert_eq!(threes, seen);
    }

    #[test]
    fn checker_rules() {
        let b = BipartiteInstance::new(3, 1, vec![(0, 0), (1, 0), (2, 0)]);
        let ok = vec![Bits::new(false, false), Bits::new(false, false), Bits::new(false, true)];
        assert!(check_iterghz(&b, &ok).is_empty());
        let bad = vec![Bits::new(true, false), Bits::new(false, false), Bits::new(false, true)];
        assert!(check_iterghz(&b, &bad).iter().any(|v| v.constraint == "iterghz.first"));
        let lucky_bad = vec![Bits::new(false, true), Bits::new(false, true), Bits::new(false, true)];
        assert!(check_iterghz(&b, &lucky_bad).iter().any(|v| v.constraint == "iterghz.lucky"));
    }

    #[test]
    fn even_game_xor_or() {
        // White 0 has two edges; its second edge meets whites 1 and 2 at their
        // second positions.
        let b = BipartiteInstance::new(
            3,
            2,
            vec![(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)],
        );
        let mut out = vec![Bits::default(); 6];
        out[1].y = true;
        out[0].y = true;
        out[2].y = false;
        // Game 0 is all-first with y = {1,1,0}: broken.
        assert!(check_iterghz(&b, &out).iter().any(|v| v.node == 3));
        let out = vec![
            Bits::new(false, false),
            Bits::new(false, false),
            Bits::new(false, true),
            Bits::new(false, false),
            Bits::new(false, false),
            Bits::new(true, true),
        ];
        // Game 1: x = (0,0,1) odd: free. Chains hold.
        assert!(check_iterghz(&b, &out).is_empty());
        let out2 = vec![
            Bits::new(false, false),
            Bits::new(false, true),
            Bits::new(false, true),
            Bits::new(false, false),
            Bits::new(true, false),
            Bits::new(true, false),
        ];
        // Game 0: y = {0,1,1} is not {0,0,1}.
        assert!(check_iterghz(&b, &out2).iter().any(|v| v.constraint == "iterghz.lucky"));
        let out3 = vec![
            Bits::new(false, true),
            Bits::new(false, false),
            Bits::new(false, false),
            Bits::new(true, false),
            Bits::new(false, false),
            Bits::new(false, false),
        ];
        // Game 1: x = (1,0,0) odd: free.
        assert!(check_iterghz(&b, &out3).is_empty());
        let out4 = vec![
            Bits::new(false, true),
            Bits::new(false, true),
            Bits::new(false, false),
            Bits::new(true, false),
            Bits::new(true, false),
            Bits::new(false, false),
        ];
        // Game 0 fails ({1,1,0}); game 1: x = (1,1,0), XOR 0 != OR 1.
        let v = check_iterghz(&b, &out4);
        assert!(v.iter().any(|v| v.constraint == "iterghz.game"));
    }

    #[test]
    fn label_round_trip() {
        let b = BipartiteInstance::new(1, 2, vec![(0, 0), (0, 1)]);
        let bits = vec![Bits::new(false, true), Bits::new(true, false)];
        let l = bits_to_labels(&b, &bits);
        assert_eq!(l, vec![GhzLabel::First { y: true }, GhzLabel::Other { x: true, y: false }]);
        assert_eq!(labels_to_bits(&l), bits);
    }
}
