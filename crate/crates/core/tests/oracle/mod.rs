//! Enumerators that share no code with the library search. Used by the
//! search cross-checks here and by the acceptance harness.

#![allow(dead_code)]

use std::collections::BTreeSet;

const HEX: u32 = u32::MAX;

pub struct Oracle {
    n: usize,
    rows: Vec<Vec<u8>>,
    /// Face claiming each directed edge, with a reference count.
    owner: Vec<Vec<(u32, u32)>>,
    found: Vec<Vec<Vec<u8>>>,
}

fn tri_id(a: u8, b: u8, c: u8) -> u32 {
    let t = [a, b, c];
    let k = (0..3).min_by_key(|&k| t[k]).unwrap();
    let (x, y, z) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
    (x as u32) << 16 | (y as u32) << 8 | z as u32
}

impl Oracle {
    fn new(n: usize) -> Self {
        let mut owner = vec![vec![(0, 0); n + 1]; n + 1];
        for i in 1..=6u8 {
            owner[i as usize][(i % 6 + 1) as usize] = (HEX, 1);
        }
        Oracle {
            n,
            rows: vec![Vec::new(); n + 1],
            owner,
            found: Vec::new(),
        }
    }

    /// Corner `p, q` at `v` is the face `q -> v -> p`, a triangle.
    fn claim(&mut self, v: u8, p: u8, q: u8) -> bool {
        let id = tri_id(q, v, p);
        let edges = [(q, v), (v, p), (p, q)];
        for (k, &(a, b)) in edges.iter().enumerate() {
            let slot = &mut self.owner[a as usize][b as usize];
            if slot.1 > 0 && slot.0 != id {
                for &(a, b) in &edges[..k] {
                    self.unclaim_edge(a, b);
                }
                return false;
            }
            *slot = (id, slot.1 + 1);
        }
        true
    }

    fn unclaim_edge(&mut self, a: u8, b: u8) {
        self.owner[a as usize][b as usize].1 -= 1;
    }

    fn release(&mut self, v: u8, p: u8, q: u8) {
        for (a, b) in [(q, v), (v, p), (p, q)] {
            self.unclaim_edge(a, b);
        }
    }

    fn run(&mut self) {
        self.fill_vertex(1);
    }

    fn fill_vertex(&mut self, v: usize) {
        if v > self.n {
            let rows: Vec<Vec<u8>> = self.rows[1..].to_vec();
            if faces_ok(&rows) {
                self.found.push(rows);
            }
            return;
        }
        let (first, last) = if v <= 6 {
            (((v + 4) % 6 + 1) as u8, (v % 6 + 1) as u8)
        } else {
            (1, 0)
        };
        let mut used = vec![false; self.n + 1];
        used[v] = true;
        used[first as usize] = true;
        if last != 0 {
            used[last as usize] = true;
        }
        self.rows[v] = vec![first];
        self.extend(v, last, &mut used);
    }

    fn extend(&mut self, v: usize, last: u8, used: &mut [bool]) {
        let len = self.rows[v].len();
        let free = self.n - 1 - len - usize::from(last != 0);
        if free == 0 {
            let vv = v as u8;
            let prev = *self.rows[v].last().unwrap();
            let first = self.rows[v][0];
            if last != 0 {
                // Hexagon row: one more corner, then the hexagon corner.
                if !self.claim(vv, prev, last) {
                    return;
                }
                self.rows[v].push(last);
                if v != 1 || residual_increasing(&self.rows[1]) {
                    self.fill_vertex(v + 1);
                }
                self.rows[v].pop();
                self.release(vv, prev, last);
            } else if self.claim(vv, prev, first) {
                self.fill_vertex(v + 1);
                self.release(vv, prev, first);
            }
            return;
        }
        let prev = *self.rows[v].last().unwrap();
        for y in 1..=self.n as u8 {
            if used[y as usize] || !self.claim(v as u8, prev, y) {
                continue;
            }
            used[y as usize] = true;
            self.rows[v].push(y);
            self.extend(v, last, used);
            self.rows[v].pop();
            used[y as usize] = false;
            self.release(v as u8, prev, y);
        }
    }
}

fn residual_increasing(row: &[u8]) -> bool {
    let r: Vec<u8> = row.iter().copied().filter(|&x| x > 6).collect();
    r.windows(2).all(|w| w[0] < w[1])
}

/// One hexagon `1 2 3 4 5 6` and triangles elsewhere, by a direct walk:
/// after `u -> v` comes `v -> w` with `w` just before `u` in the row of `v`.
pub fn faces_ok(rows: &[Vec<u8>]) -> bool {
    let n = rows.len();
    let pred = |v: u8, u: u8| {
        let r = &rows[v as usize - 1];
        let k = r.iter().position(|&x| x == u).unwrap();
        r[(k + r.len() - 1) % r.len()]
    };
    let mut seen = BTreeSet::new();
    let mut hexagons = 0;
    for u in 1..=n as u8 {
        for &v in &rows[u as usize - 1] {
            if seen.contains(&(u, v)) {
                continue;
            }
            let mut walk = vec![u];
            let (mut a, mut b) = (u, v);
            loop {
                seen.insert((a, b));
                let c = pred(b, a);
                a = b;
                b = c;
                if (a, b) == (u, v) {
                    break;
                }
                walk.push(a);
            }
            match walk.len() {
                3 => {}
                6 => {
                    let k = walk.iter().position(|&x| x == 1).unwrap();
                    walk.rotate_left(k);
                    if walk != [1, 2, 3, 4, 5, 6] {
                        return false;
                    }
                    hexagons += 1;
                }
                _ => return false,
            }
        }
    }
    hexagons == 1
}

/// Every system of K6 with rows `(i-1, .., i+1)`, traced without pruning.
pub fn brute_force_k6() -> Vec<Vec<Vec<u8>>> {
    let middles: Vec<Vec<Vec<u8>>> = (1..=6u8)
        .map(|v| {
            let (first, last) = ((v + 4) % 6 + 1, v % 6 + 1);
            let rest: Vec<u8> = (1..=6)
                .filter(|&x| x != v && x != first && x != last)
                .collect();
            permutations(&rest)
                .into_iter()
                .map(|m| [vec![first], m, vec![last]].concat())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = [0usize; 6];
    loop {
        let rows: Vec<Vec<u8>> = (0..6).map(|i| middles[i][idx[i]].clone()).collect();
        if faces_ok(&rows) {
            out.push(rows);
        }
        let mut k = 0;
        while k < 6 {
            idx[k] += 1;
            if idx[k] < middles[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == 6 {
            break;
        }
    }
    out.sort();
    out
}

fn permutations(items: &[u8]) -> Vec<Vec<u8>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Every system of K7 with hexagon rows `(i-1, .., i+1)`: all `24^6`
/// choices of rows 1-6, none skipped. Row 7 is then forced, since every face
/// at 7 is a triangle: `p 7 q` in row `v` puts `v p` and `q v` in row 7.
pub fn prune_free_k7() -> (u64, Vec<Vec<Vec<u8>>>) {
    let cands: Vec<Vec<(Vec<u8>, u8, u8)>> = (1..=6u8)
        .map(|v| {
            let (first, last) = ((v + 4) % 6 + 1, v % 6 + 1);
            let rest: Vec<u8> = (1..=7)
                .filter(|&x| x != v && x != first && x != last)
                .collect();
            permutations(&rest)
                .into_iter()
                .map(|m| {
                    let row = [vec![first], m, vec![last]].concat();
                    let k = row.iter().position(|&x| x == 7).unwrap();
                    (row.clone(), row[k - 1], row[k + 1])
                })
                .collect()
        })
        .collect();
    let mut leaves = 0u64;
    let mut out = Vec::new();
    let mut idx = [0usize; 6];
    loop {
        leaves += 1;
        // succ7[v] = p from row v; row q must then agree that succ7[q] = v.
        let mut succ = [0u8; 7];
        for v in 0..6 {
            succ[v + 1] = cands[v][idx[v]].1;
        }
        let consistent = (0..6).all(|v| succ[cands[v][idx[v]].2 as usize] == v as u8 + 1);
        if consistent {
            let mut row7 = vec![1u8];
            while row7.len() < 6 {
                row7.push(succ[*row7.last().unwrap() as usize]);
            }
            if succ[row7[5] as usize] == 1 && row7.iter().collect::<BTreeSet<_>>().len() == 6 {
                let mut rows: Vec<Vec<u8>> = (0..6).map(|v| cands[v][idx[v]].0.clone()).collect();
                rows.push(row7);
                if faces_ok(&rows) {
                    out.push(rows);
                }
            }
        }
        let mut k = 0;
        while k < 6 {
            idx[k] += 1;
            if idx[k] < 24 {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == 6 {
            break;
        }
    }
    out.sort();
    (leaves, out)
}

pub fn oracle_rows(n: usize) -> Vec<Vec<Vec<u8>>> {
    let mut o = Oracle::new(n);
    o.run();
    let mut out = o.found;
    out.sort();
    out
}
