//! Finite graded posets and lattices.
//!
//! Element ids are `0..len()` and are frozen at construction; every
//! enumeration order downstream (chains, generators, signs) derives from
//! them. Boolean lattices are stored implicitly: element ids are bitmasks
//! over the atoms.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::exactlin::{q, Rational};

/// Largest Boolean lattice (number of atoms) we are willing to build.
pub const MAX_BOOLEAN_ATOMS: usize = 20;
/// Above this many atoms a Boolean cover is considered expensive.
pub const WARN_BOOLEAN_ATOMS: usize = 16;
/// Join/meet tables are tabulated eagerly up to this many elements.
const EAGER_TABLE_LIMIT: usize = 1 << 12;

#[derive(Clone, Debug)]
enum Order {
    Explicit {
        rank: Vec<usize>,
        up: Vec<Vec<usize>>,
        down: Vec<Vec<usize>>,
        /// `above[x]` holds every `y` with `x <= y`.
        above: Vec<FixedBitSet>,
        /// `below[x]` holds every `y` with `y <= x`.
        below: Vec<FixedBitSet>,
    },
    Subsets {
        atoms: usize,
    },
}

/// A finite graded poset.
#[derive(Clone, Debug)]
pub struct Poset {
    order: Order,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        match (&self.order, &other.order) {
            (Order::Subsets { atoms: a }, Order::Subsets { atoms: b }) => a == b,
            (Order::Explicit { rank: r1, up: u1, .. }, Order::Explicit { rank: r2, up: u2, .. }) => {
                r1 == r2 && u1 == u2
            }
            _ => false,
        }
    }
}

impl Eq for Poset {}

impl Poset {
    /// Builds a poset from its cover relation. `covers` are `(lower, upper)`
    /// pairs. When `rank` is `None` it is computed as the length of the
    /// longest chain down to a minimal element.
    pub fn from_covers(n: usize, covers: &[(usize, usize)], rank: Option<Vec<usize>>) -> Result<Self> {
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(x, y) in covers {
            if x >= n || y >= n {
                return Err(Error::InvalidPoset(format!("cover ({x}, {y}) out of range")));
            }
            if x == y {
                return Err(Error::InvalidPoset(format!("self-loop at {x}")));
            }
            up[x].push(y);
            down[y].push(x);
        }
        for v in up.iter_mut().chain(down.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        let topo = topological_order(&up, &down)
            .ok_or_else(|| Error::InvalidPoset("cover relation has a cycle".into()))?;
        let rank = match rank {
            Some(r) => {
                if r.len() != n {
                    return Err(Error::InvalidPoset("rank array has wrong length".into()));
                }
                r
            }
            None => {
                let mut r = vec![0; n];
                for &x in &topo {
                    r[x] = down[x].iter().map(|&w| r[w] + 1).max().unwrap_or(0);
                }
                r
            }
        };
        for &(x, y) in covers {
            if rank[y] != rank[x] + 1 {
                return Err(Error::InvalidPoset(format!(
                    "rank must increase by one along cover ({x}, {y}): {} -> {}",
                    rank[x], rank[y]
                )));
            }
        }
        let above = upper_sets(&up, &topo);
        for x in 0..n {
            for &y in &up[x] {
                if up[x].iter().any(|&z| z != y && above[z].contains(y)) {
                    return Err(Error::InvalidPoset(format!("({x}, {y}) is not a cover relation")));
                }
            }
        }
        let below = transpose_sets(&above);
        Ok(Poset { order: Order::Explicit { rank, up, down, above, below } })
    }

    /// Builds a graded poset from ranks and an order predicate. Covers are
    /// the comparable pairs whose ranks differ by one.
    pub fn from_graded_order(rank: Vec<usize>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = rank.len();
        let mut covers = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if rank[y] == rank[x] + 1 && leq(x, y) {
                    covers.push((x, y));
                }
            }
        }
        let p = Self::from_covers(n, &covers, Some(rank))?;
        for x in 0..n {
            for y in 0..n {
                if p.leq(x, y) != leq(x, y) {
                    return Err(Error::InvalidPoset(format!(
                        "order between {x} and {y} is not generated by rank-one covers"
                    )));
                }
            }
        }
        Ok(p)
    }

    /// The Boolean lattice on `atoms` atoms as a poset on bitmasks.
    pub fn boolean(atoms: usize) -> Result<Self> {
        if atoms > MAX_BOOLEAN_ATOMS {
            return Err(Error::Guard {
                what: "Boolean lattice atoms",
                count: atoms as u128,
                limit: MAX_BOOLEAN_ATOMS as u128,
            });
        }
        Ok(Poset { order: Order::Subsets { atoms } })
    }

    pub fn len(&self) -> usize {
        match &self.order {
            Order::Explicit { rank, .. } => rank.len(),
            Order::Subsets { atoms } => 1 << atoms,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of atoms if this is an implicitly stored Boolean lattice.
    pub fn boolean_atoms(&self) -> Option<usize> {
        match &self.order {
            Order::Subsets { atoms } => Some(*atoms),
            Order::Explicit { .. } => None,
        }
    }

    pub fn rank(&self, x: usize) -> usize {
        match &self.order {
            Order::Explicit { rank, .. } => rank[x],
            Order::Subsets { .. } => x.count_ones() as usize,
        }
    }

    pub fn ranks(&self) -> Vec<usize> {
        (0..self.len()).map(|x| self.rank(x)).collect()
    }

    pub fn max_rank(&self) -> usize {
        match &self.order {
            Order::Explicit { rank, .. } => rank.iter().copied().max().unwrap_or(0),
            Order::Subsets { atoms } => *atoms,
        }
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        match &self.order {
            Order::Explicit { above, .. } => above[x].contains(y),
            Order::Subsets { .. } => x & y == x,
        }
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// Elements covering `x`, ascending.
    pub fn covers_up(&self, x: usize) -> Vec<usize> {
        match &self.order {
            Order::Explicit { up, .. } => up[x].clone(),
            Order::Subsets { atoms } => (0..*atoms).filter(|i| x & (1 << i) == 0).map(|i| x | (1 << i)).collect(),
        }
    }

    /// Elements covered by `x`, ascending.
    pub fn covers_down(&self, x: usize) -> Vec<usize> {
        match &self.order {
            Order::Explicit { down, .. } => down[x].clone(),
            Order::Subsets { atoms } => {
                let mut v: Vec<usize> =
                    (0..*atoms).filter(|i| x & (1 << i) != 0).map(|i| x & !(1 << i)).collect();
                v.sort_unstable();
                v
            }
        }
    }

    /// All cover pairs `(lower, upper)` in ascending order.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|x| self.covers_up(x).into_iter().map(move |y| (x, y))).collect()
    }

    pub fn elements_of_rank(&self, r: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.rank(x) == r).collect()
    }

    pub fn minimum(&self) -> Option<usize> {
        if let Order::Subsets { .. } = self.order {
            return Some(0);
        }
        let n = self.len();
        (0..n).find(|&x| (0..n).all(|y| self.leq(x, y)))
    }

    pub fn maximum(&self) -> Option<usize> {
        if let Order::Subsets { .. } = self.order {
            return Some(self.len() - 1);
        }
        let n = self.len();
        (0..n).find(|&x| (0..n).all(|y| self.leq(y, x)))
    }

    /// Elements `z` with `x <= z <= y`, sorted by rank then id.
    pub fn interval(&self, x: usize, y: usize) -> Vec<usize> {
        let mut v: Vec<usize> = match &self.order {
            Order::Subsets { .. } => {
                let free = y & !x;
                submasks(free).into_iter().map(|s| s | x).filter(|&z| self.leq(x, z) && self.leq(z, y)).collect()
            }
            Order::Explicit { above, below, .. } => {
                let mut s = above[x].clone();
                s.intersect_with(&below[y]);
                s.ones().collect()
            }
        };
        v.sort_by_key(|&z| (self.rank(z), z));
        v
    }

    /// Induced subposet on `elems` (kept in the given order, which becomes
    /// the new id order). Ranks are shifted down by `shift`.
    pub fn induced(&self, elems: &[usize], shift: usize) -> Poset {
        let n = elems.len();
        let rank: Vec<usize> = elems.iter().map(|&e| self.rank(e) - shift).collect();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for (i, &x) in elems.iter().enumerate() {
            let mut above: Vec<usize> = (0..n).filter(|&j| self.lt(x, elems[j])).collect();
            above.sort_by_key(|&j| (self.rank(elems[j]), j));
            let mut covers: Vec<usize> = Vec::new();
            for j in above {
                if !covers.iter().any(|&c| self.leq(elems[c], elems[j])) {
                    covers.push(j);
                }
            }
            covers.sort_unstable();
            for &j in &covers {
                down[j].push(i);
            }
            up[i] = covers;
        }
        let topo = topological_order(&up, &down).expect("induced order is acyclic");
        let above = upper_sets(&up, &topo);
        let below = transpose_sets(&above);
        Poset { order: Order::Explicit { rank, up, down, above, below } }
    }

    /// The principal upper set `{z : z >= x}` with ranks shifted so that `x`
    /// has rank 0. Returns the subposet and the embedding of its ids.
    pub fn interval_geq(&self, x: usize) -> (Poset, Vec<usize>) {
        let elems: Vec<usize> = (0..self.len()).filter(|&z| self.leq(x, z)).collect();
        (self.induced(&elems, self.rank(x)), elems)
    }

    /// The principal lower set `{z : z <= x}`.
    pub fn interval_leq(&self, x: usize) -> (Poset, Vec<usize>) {
        let elems: Vec<usize> = (0..self.len()).filter(|&z| self.leq(z, x)).collect();
        (self.induced(&elems, 0), elems)
    }

    /// Drops the unique minimum. Ranks are kept.
    pub fn remove_minimum(&self) -> Result<(Poset, Vec<usize>)> {
        let m = self.minimum().ok_or(Error::NoMinimum)?;
        let elems: Vec<usize> = (0..self.len()).filter(|&z| z != m).collect();
        Ok((self.induced(&elems, 0), elems))
    }

    fn strictly_above(&self, x: usize) -> Vec<usize> {
        match &self.order {
            Order::Explicit { above, .. } => above[x].ones().filter(|&y| y != x).collect(),
            Order::Subsets { .. } => (0..self.len()).filter(|&y| self.lt(x, y)).collect(),
        }
    }

    /// Number of strict chains `x_n < ... < x_0` (with `n + 1` elements).
    pub fn count_chains(&self, n: usize) -> u128 {
        self.chain_counts(n).into_iter().sum()
    }

    /// `counts[x]` = number of strict `n`-chains whose bottom element is `x`.
    fn chain_counts(&self, n: usize) -> Vec<u128> {
        let len = self.len();
        let mut counts = vec![1u128; len];
        for _ in 0..n {
            counts = (0..len)
                .map(|x| self.strictly_above(x).iter().map(|&y| counts[y]).fold(0u128, |a, b| a.saturating_add(b)))
                .collect();
        }
        counts
    }

    /// Number of strict `n`-chains whose top element is `x`, for each `x`.
    pub fn chains_ending_at(&self, n: usize) -> Vec<u128> {
        let len = self.len();
        let mut counts = vec![1u128; len];
        for _ in 0..n {
            counts = (0..len)
                .map(|x| (0..len).filter(|&w| self.lt(w, x)).map(|w| counts[w]).fold(0u128, |a, b| a.saturating_add(b)))
                .collect();
        }
        counts
    }

    /// All strict chains with `n + 1` elements, each listed bottom-up
    /// (`[x_n, ..., x_0]`), in lexicographic order. Fails with a guard error
    /// if there are more than `limit` of them.
    pub fn strict_chains(&self, n: usize, limit: u128) -> Result<Vec<Vec<usize>>> {
        let count = self.count_chains(n);
        if count > limit {
            return Err(Error::Guard { what: "strict chains", count, limit });
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut stack = Vec::with_capacity(n + 1);
        for x in 0..self.len() {
            stack.push(x);
            self.extend_chains(n, &mut stack, &mut out);
            stack.pop();
        }
        Ok(out)
    }

    fn extend_chains(&self, n: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if stack.len() == n + 1 {
            out.push(stack.clone());
            return;
        }
        let last = *stack.last().unwrap();
        for y in self.strictly_above(last) {
            stack.push(y);
            self.extend_chains(n, stack, out);
            stack.pop();
        }
    }

    /// Length of the longest strict chain minus one (the order-complex
    /// dimension); `None` for the empty poset.
    pub fn height(&self) -> Option<usize> {
        if self.is_empty() {
            return None;
        }
        let mut n = 0;
        while self.count_chains(n + 1) > 0 {
            n += 1;
        }
        Some(n)
    }
}

fn submasks(m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut s = m;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & m;
    }
    out
}

fn topological_order(up: &[Vec<usize>], down: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = up.len();
    let mut indeg: Vec<usize> = down.iter().map(Vec::len).collect();
    let mut ready: Vec<usize> = (0..n).rev().filter(|&x| indeg[x] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(x) = ready.pop() {
        order.push(x);
        for &y in &up[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                ready.push(y);
            }
        }
    }
    (order.len() == n).then_some(order)
}

fn transpose_sets(above: &[FixedBitSet]) -> Vec<FixedBitSet> {
    let n = above.len();
    let mut below = vec![FixedBitSet::with_capacity(n); n];
    for (x, s) in above.iter().enumerate() {
        for y in s.ones() {
            below[y].insert(x);
        }
    }
    below
}

fn upper_sets(up: &[Vec<usize>], topo: &[usize]) -> Vec<FixedBitSet> {
    let n = up.len();
    let mut above = vec![FixedBitSet::with_capacity(n); n];
    for &x in topo.iter().rev() {
        let mut s = FixedBitSet::with_capacity(n);
        s.insert(x);
        for &y in &up[x] {
            s.union_with(&above[y]);
        }
        above[x] = s;
    }
    above
}

#[derive(Clone, Debug)]
enum Tables {
    Boolean,
    Dense { join: Vec<u32>, meet: Vec<u32> },
    Lazy,
}

/// A finite graded atomic lattice.
#[derive(Clone, Debug)]
pub struct Lattice {
    poset: Arc<Poset>,
    bottom: usize,
    top: usize,
    atoms: Vec<usize>,
    tables: Tables,
    mobius_bottom: OnceLock<Vec<i64>>,
}

impl Lattice {
    /// Validates that `poset` is a lattice with `rank(0) = 0` and tabulates
    /// joins and meets when affordable.
    pub fn new(poset: Poset) -> Result<Self> {
        let poset = Arc::new(poset);
        if let Some(n) = poset.boolean_atoms() {
            return Ok(Lattice {
                atoms: (0..n).map(|i| 1 << i).collect(),
                bottom: 0,
                top: (1 << n) - 1,
                poset,
                tables: Tables::Boolean,
                mobius_bottom: OnceLock::new(),
            });
        }
        if poset.is_empty() {
            return Err(Error::NotLattice("empty poset".into()));
        }
        let bottom = poset.minimum().ok_or_else(|| Error::NotLattice("no minimum".into()))?;
        let top = poset.maximum().ok_or_else(|| Error::NotLattice("no maximum".into()))?;
        if poset.rank(bottom) != 0 {
            return Err(Error::NotLattice("minimum must have rank 0".into()));
        }
        let atoms = poset.covers_up(bottom);
        let mut lat = Lattice { poset, bottom, top, atoms, tables: Tables::Lazy, mobius_bottom: OnceLock::new() };
        let n = lat.poset.len();
        let (mut join, mut meet) = (Vec::new(), Vec::new());
        let eager = n <= EAGER_TABLE_LIMIT;
        for x in 0..n {
            for y in 0..n {
                let j = lat.compute_join(x, y)?;
                let m = lat.compute_meet(x, y)?;
                if eager {
                    join.push(j as u32);
                    meet.push(m as u32);
                }
            }
        }
        if eager {
            lat.tables = Tables::Dense { join, meet };
        }
        for x in 0..n {
            if lat.join_all(lat.atoms_below(x)) != x {
                return Err(Error::NotLattice(format!("element {x} is not a join of atoms")));
            }
        }
        Ok(lat)
    }

    fn compute_join(&self, x: usize, y: usize) -> Result<usize> {
        let Order::Explicit { rank, above, .. } = &self.poset.order else {
            return Ok(x | y);
        };
        let mut ub = above[x].clone();
        ub.intersect_with(&above[y]);
        ub.ones()
            .min_by_key(|&u| (rank[u], u))
            .filter(|&u| ub.is_subset(&above[u]))
            .ok_or_else(|| Error::NotLattice(format!("no least upper bound for {x}, {y}")))
    }

    fn compute_meet(&self, x: usize, y: usize) -> Result<usize> {
        let Order::Explicit { rank, below, .. } = &self.poset.order else {
            return Ok(x & y);
        };
        let mut lb = below[x].clone();
        lb.intersect_with(&below[y]);
        lb.ones()
            .max_by_key(|&u| (rank[u], u))
            .filter(|&u| lb.is_subset(&below[u]))
            .ok_or_else(|| Error::NotLattice(format!("no greatest lower bound for {x}, {y}")))
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn rank(&self) -> usize {
        self.poset.rank(self.top)
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        let n = self.poset.len();
        match &self.tables {
            Tables::Boolean => x | y,
            Tables::Dense { join, .. } => join[x * n + y] as usize,
            Tables::Lazy => self.compute_join(x, y).expect("validated lattice"),
        }
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        let n = self.poset.len();
        match &self.tables {
            Tables::Boolean => x & y,
            Tables::Dense { meet, .. } => meet[x * n + y] as usize,
            Tables::Lazy => self.compute_meet(x, y).expect("validated lattice"),
        }
    }

    /// Join of a collection; the empty join is the minimum.
    pub fn join_all(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn atoms_below(&self, x: usize) -> Vec<usize> {
        self.atoms.iter().copied().filter(|&a| self.poset.leq(a, x)).collect()
    }

    /// `μ(x, y)` by the defining recursion over `[x, y]`.
    pub fn mobius(&self, x: usize, y: usize) -> Result<Rational> {
        if !self.poset.leq(x, y) {
            return Err(Error::NotComparable(x, y));
        }
        if x == self.bottom {
            return Ok(q(self.mobius_from_bottom()[y]));
        }
        Ok(q(mobius_on_interval(&self.poset, x, y)))
    }

    /// `μ(0, x)` for every `x`, memoized.
    pub fn mobius_from_bottom(&self) -> &[i64] {
        self.mobius_bottom.get_or_init(|| {
            if self.poset.boolean_atoms().is_some() {
                return (0..self.len()).map(|x| if x.count_ones() % 2 == 0 { 1 } else { -1 }).collect();
            }
            let mut order: Vec<usize> = (0..self.len()).collect();
            order.sort_by_key(|&z| (self.poset.rank(z), z));
            let mut mu = vec![0i64; self.len()];
            for &z in &order {
                mu[z] = if z == self.bottom {
                    1
                } else {
                    -order.iter().filter(|&&w| self.poset.lt(w, z)).map(|&w| mu[w]).sum::<i64>()
                };
            }
            mu
        })
    }

    /// `a` lies in a dependent set `S` with `⋁(S \ a) = ⋁S`; equivalently
    /// the join of the other atoms already reaches the top.
    pub fn is_dependent_atom(&self, a: usize) -> Result<bool> {
        if !self.atoms.contains(&a) {
            return Err(Error::NotAtom(a));
        }
        let rest = self.join_all(self.atoms.iter().copied().filter(|&b| b != a));
        Ok(rest == self.top)
    }

    /// Semimodularity of the rank function on every pair.
    pub fn is_geometric(&self) -> bool {
        let n = self.len();
        let p = &self.poset;
        (0..n).all(|x| {
            (0..n).all(|y| p.rank(self.join(x, y)) + p.rank(self.meet(x, y)) <= p.rank(x) + p.rank(y))
        })
    }

    /// In a geometric lattice a set of atoms is independent iff the rank of
    /// its join equals its size.
    pub fn is_independent(&self, atoms: &[usize]) -> bool {
        self.poset.rank(self.join_all(atoms.iter().copied())) == atoms.len()
    }

    pub fn is_boolean(&self) -> bool {
        self.len() == 1usize << self.atoms.len() && self.rank() == self.atoms.len()
    }
}

fn mobius_on_interval(p: &Poset, x: usize, y: usize) -> i64 {
    let iv = p.interval(x, y);
    let mut mu: HashMap<usize, i64> = HashMap::new();
    for &z in &iv {
        let v = if z == x { 1 } else { -iv.iter().filter(|&&w| p.lt(w, z)).map(|w| mu[w]).sum::<i64>() };
        mu.insert(z, v);
    }
    mu[&y]
}

/// The Boolean lattice `B(A)` on a named, ordered atom set. Element ids are
/// bitmasks: bit `i` is atom `i`.
#[derive(Clone, Debug)]
pub struct BooleanLattice {
    atom_names: Vec<String>,
    lattice: Lattice,
}

impl BooleanLattice {
    pub fn new(atom_names: Vec<String>) -> Result<Self> {
        let lattice = Lattice::new(Poset::boolean(atom_names.len())?)?;
        Ok(BooleanLattice { atom_names, lattice })
    }

    /// Atoms named `"0"`, `"1"`, ...
    pub fn with_atoms(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect())
    }

    pub fn atom_count(&self) -> usize {
        self.atom_names.len()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atom_names
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn poset(&self) -> &Arc<Poset> {
        self.lattice.poset()
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn full_set(&self) -> usize {
        self.lattice.top()
    }
}

/// Convenience constructor mirroring the usual notation `B(A)`.
pub fn boolean_lattice(atom_names: Vec<String>) -> Result<BooleanLattice> {
    BooleanLattice::new(atom_names)
}
