//! Singular fibers of P^1-fibrations and their horizontal budgets.
//!
//! Every singular fiber of a P^1-fibration on a smooth rational surface is
//! obtained from a smooth fiber by blowing up points on the fiber, so all
//! of them are trees of rational curves. [`enumerate_fibers`] generates
//! them up to isomorphism of weighted trees. [`fibers_containing`] keeps the
//! fibers that can contain given chains of the exceptional divisor `D` of
//! a minimal resolution, given the horizontal curves available to meet the
//! fiber.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::hj::Chain;
use crate::{Error, Result};

/// Largest supported component count for [`enumerate_fibers`].
pub const MAX_COMPONENTS: usize = 10;
pub const DEFAULT_COMPONENTS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    pub self_intersection: i64,
    pub multiplicity: u32,
}

impl Component {
    pub fn new(self_intersection: i64, multiplicity: u32) -> Self {
        Component { self_intersection, multiplicity }
    }

    pub fn is_minus_one(&self) -> bool {
        self.self_intersection == -1
    }

    /// Weight `-C^2`.
    pub fn weight(&self) -> i64 {
        -self.self_intersection
    }
}

/// A fiber `F = sum m_i C_i` whose components form a tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiberConfig {
    components: Vec<Component>,
    /// `(i, j)` with `i < j`, sorted.
    edges: Vec<(usize, usize)>,
}

impl FiberConfig {
    /// Validates that the graph is a tree and that `F.C = 0` for every
    /// component.
    pub fn new(components: Vec<Component>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::InvalidFiber("no components"));
        }
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidFiber("edge endpoint out of range"));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if norm.windows(2).any(|w| w[0] == w[1]) || norm.len() >= n {
            return Err(Error::CyclicFiber);
        }
        let config = FiberConfig { components, edges: norm };
        if !config.is_connected() {
            return Err(Error::InvalidFiber("components are not connected"));
        }
        if config.components.iter().any(|c| c.multiplicity == 0 || c.self_intersection > -1) {
            return Err(Error::InvalidFiber("components need C^2 <= -1 and positive multiplicity"));
        }
        if !config.is_numerically_fiber() {
            return Err(Error::InvalidFiber("F.C != 0 for some component"));
        }
        Ok(config)
    }

    /// Two `(-1)`-curves of multiplicity one meeting once.
    pub fn base() -> Self {
        FiberConfig { components: vec![Component::new(-1, 1); 2], edges: vec![(0, 1)] }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| if a == i { Some(b) } else if b == i { Some(a) } else { None })
            .collect();
        out.sort_unstable();
        out
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// `F.C_i = m_i C_i^2 + sum of neighbouring multiplicities`.
    pub fn f_dot(&self, i: usize) -> i64 {
        let c = self.components[i];
        c.multiplicity as i64 * c.self_intersection
            + self.neighbors(i).iter().map(|&j| self.components[j].multiplicity as i64).sum::<i64>()
    }

    pub fn is_numerically_fiber(&self) -> bool {
        (0..self.len()).all(|i| self.f_dot(i) == 0)
    }

    pub fn f_squared(&self) -> i64 {
        (0..self.len()).map(|i| self.components[i].multiplicity as i64 * self.f_dot(i)).sum()
    }

    /// `K.F = sum m_i (-2 - C_i^2)`, which is `-2` for a fiber.
    pub fn k_dot_f(&self) -> i64 {
        self.components.iter().map(|c| c.multiplicity as i64 * (-2 - c.self_intersection)).sum()
    }

    pub fn minus_one_curves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.components[i].is_minus_one()).collect()
    }

    /// Blows up a general point of component `i`.
    pub fn blow_up_free(&self, i: usize) -> FiberConfig {
        let mut out = self.clone();
        out.components[i].self_intersection -= 1;
        out.components.push(Component::new(-1, self.components[i].multiplicity));
        out.edges.push((i, self.len()));
        out.edges.sort_unstable();
        out
    }

    /// Blows up the point where the components of `edge` meet.
    pub fn blow_up_node(&self, edge: (usize, usize)) -> FiberConfig {
        let (a, b) = edge;
        let mut out = self.clone();
        out.components[a].self_intersection -= 1;
        out.components[b].self_intersection -= 1;
        let m = self.components[a].multiplicity + self.components[b].multiplicity;
        out.components.push(Component::new(-1, m));
        let n = self.len();
        out.edges.retain(|&e| e != (a.min(b), a.max(b)));
        out.edges.push((a.min(b), n));
        out.edges.push((b.min(a), n));
        out.edges.push((a.max(b), n));
        out.edges.retain(|&(x, y)| x != y);
        out.edges.sort_unstable();
        out.edges.dedup();
        out
    }

    /// Contracts the `(-1)`-curve `e`, which must have at most two
    /// neighbours (otherwise the image is not a tree with normal crossings).
    pub fn contract(&self, e: usize) -> Option<FiberConfig> {
        let nb = self.neighbors(e);
        if !self.components[e].is_minus_one() || nb.len() > 2 || self.len() < 2 {
            return None;
        }
        let mut comps = self.components.clone();
        for &j in &nb {
            comps[j].self_intersection += 1;
        }
        let map = |i: usize| if i > e { i - 1 } else { i };
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(a, b)| a != e && b != e)
            .map(|&(a, b)| (map(a), map(b)))
            .collect();
        if let [x, y] = nb[..] {
            edges.push((map(x), map(y)));
        }
        comps.remove(e);
        FiberConfig::new(comps, edges).ok()
    }

    fn centers(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
        let mut remaining = self.len();
        let mut leaves: Vec<usize> = (0..self.len()).filter(|&i| degree[i] <= 1).collect();
        let mut removed = vec![false; self.len()];
        while remaining > 2 {
            remaining -= leaves.len();
            let mut next = Vec::new();
            for &l in &leaves {
                removed[l] = true;
                for &w in &adj[l] {
                    if !removed[w] {
                        degree[w] -= 1;
                        if degree[w] == 1 {
                            next.push(w);
                        }
                    }
                }
            }
            leaves = next;
        }
        (0..self.len()).filter(|&i| !removed[i]).collect()
    }

    fn encode(&self, adj: &[Vec<usize>], v: usize, parent: Option<usize>, order: &mut Vec<usize>) -> String {
        let mut kids: Vec<(String, Vec<usize>)> = adj[v]
            .iter()
            .filter(|&&w| Some(w) != parent)
            .map(|&w| {
                let mut sub = Vec::new();
                (self.encode(adj, w, Some(v), &mut sub), sub)
            })
            .collect();
        kids.sort();
        let c = self.components[v];
        let mut s = format!("({},{}", c.self_intersection, c.multiplicity);
        order.push(v);
        for (k, sub) in kids {
            s.push_str(&k);
            order.extend(sub);
        }
        s.push(')');
        s
    }

    /// A string that is equal for two fibers exactly when they are
    /// isomorphic as weighted trees.
    pub fn canonical_key(&self) -> String {
        self.canonical_parts().0
    }

    fn canonical_parts(&self) -> (String, Vec<usize>) {
        let adj = self.adjacency();
        self.centers()
            .into_iter()
            .map(|c| {
                let mut order = Vec::new();
                (self.encode(&adj, c, None, &mut order), order)
            })
            .min()
            .expect("nonempty fiber")
    }

    /// The isomorphic fiber with components in canonical order.
    pub fn canonical(&self) -> FiberConfig {
        let (_, order) = self.canonical_parts();
        let mut pos = vec![0; self.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| (pos[a].min(pos[b]), pos[a].max(pos[b])))
            .collect();
        edges.sort_unstable();
        FiberConfig { components: order.iter().map(|&i| self.components[i]).collect(), edges }
    }

    /// Component order along the fiber when it is a path, oriented so the
    /// first element is the smaller endpoint.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        let adj = self.adjacency();
        if adj.iter().any(|a| a.len() > 2) {
            return None;
        }
        let start = (0..self.len()).find(|&i| adj[i].len() <= 1)?;
        let mut order = vec![start];
        while order.len() < self.len() {
            let last = *order.last().unwrap();
            let prev = order.len().checked_sub(2).map(|p| order[p]);
            order.push(*adj[last].iter().find(|&&w| Some(w) != prev)?);
        }
        Some(order)
    }

    fn format_with(&self, names: &[String], order: Option<Vec<usize>>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let item = |i: usize| {
            let c = self.components[i];
            format!("{}({},{})", names[i], c.self_intersection, c.multiplicity)
        };
        match order {
            Some(order) => {
                let parts: Vec<String> = order.into_iter().map(item).collect();
                f.write_str(&parts.join(" - "))
            }
            None => {
                let parts: Vec<String> = (0..self.len()).map(item).collect();
                f.write_str(&parts.join(", "))?;
                f.write_str("; edges")?;
                for &(a, b) in &self.edges {
                    write!(f, " {}-{}", a + 1, b + 1)?;
                }
                Ok(())
            }
        }
    }

    fn default_names(&self) -> Vec<String> {
        let mut e = 0;
        let mut c = 0;
        self.components
            .iter()
            .map(|comp| {
                if comp.is_minus_one() {
                    e += 1;
                    format!("E{e}")
                } else {
                    c += 1;
                    format!("C{c}")
                }
            })
            .collect()
    }
}

impl fmt::Display for FiberConfig {
    /// Paths print as `E1(-1,1) - C1(-2,2) - E2(-1,1)` (name, `C^2`,
    /// multiplicity); other trees list components and then their edges.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order = self.path_order();
        let names = match &order {
            Some(o) => {
                let relabeled = FiberConfig {
                    components: o.iter().map(|&i| self.components[i]).collect(),
                    edges: Vec::new(),
                };
                let mut names = vec![String::new(); self.len()];
                for (k, n) in relabeled.default_names().into_iter().enumerate() {
                    names[o[k]] = n;
                }
                names
            }
            None => self.default_names(),
        };
        self.format_with(&names, order, f)
    }
}

impl FromStr for FiberConfig {
    type Err = Error;

    /// Accepts the [`Display`](fmt::Display) forms; names are optional.
    fn from_str(s: &str) -> Result<Self> {
        let err = |reason| Error::Parse { input: s.to_string(), reason };
        let (body, edge_part) = match s.split_once(';') {
            Some((b, e)) => (b, Some(e)),
            None => (s, None),
        };
        let mut comps = Vec::new();
        let mut rest = body.trim();
        // components: `Name(a,b)` separated by `sep`; commas inside parens
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| err("expected Name(C^2,m)"))?;
            let close = rest.find(')').ok_or_else(|| err("unclosed parenthesis"))?;
            let (a, b) = rest[open + 1..close].split_once(',').ok_or_else(|| err("expected C^2,m"))?;
            let a: i64 = a.trim().parse().map_err(|_| err("bad self-intersection"))?;
            let b: u32 = b.trim().parse().map_err(|_| err("bad multiplicity"))?;
            comps.push(Component::new(a, b));
            rest = rest[close + 1..].trim_start();
            if let Some(r) = rest.strip_prefix('-').or_else(|| rest.strip_prefix(',')) {
                rest = r.trim_start();
            } else if !rest.is_empty() {
                return Err(err("expected separator between components"));
            }
        }
        let edges = match edge_part {
            None => (1..comps.len()).map(|i| (i - 1, i)).collect(),
            Some(e) => {
                let e = e.trim().strip_prefix("edges").ok_or_else(|| err("expected `; edges i-j ...`"))?;
                e.split_whitespace()
                    .map(|t| {
                        let (a, b) = t.split_once('-').ok_or_else(|| err("expected i-j"))?;
                        let a: usize = a.parse().map_err(|_| err("bad edge"))?;
                        let b: usize = b.parse().map_err(|_| err("bad edge"))?;
                        if a == 0 || b == 0 {
                            return Err(err("edges are 1-based"));
                        }
                        Ok((a - 1, b - 1))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        FiberConfig::new(comps, edges)
    }
}

/// All fibers with at most `max_components` components, grouped by size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberCatalog {
    /// `by_size[n]` holds the fibers with `n` components in canonical order.
    by_size: Vec<Vec<FiberConfig>>,
}

impl FiberCatalog {
    pub fn with_components(&self, n: usize) -> &[FiberConfig] {
        self.by_size.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_size.iter().map(Vec::len).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FiberConfig> {
        self.by_size.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_size.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Every singular fiber with at most `max_components` components, obtained
/// from [`FiberConfig::base`] by blow-ups of fiber points.
pub fn enumerate_fibers(max_components: usize) -> Result<FiberCatalog> {
    if max_components > MAX_COMPONENTS {
        return Err(Error::BoundExceeded { requested: max_components, max: MAX_COMPONENTS });
    }
    let mut by_size = vec![Vec::new(); max_components.max(1) + 1];
    if max_components < 2 {
        by_size.truncate(max_components + 1);
        return Ok(FiberCatalog { by_size });
    }
    by_size[2] = vec![FiberConfig::base()];
    for n in 3..=max_components {
        let mut next: BTreeMap<String, FiberConfig> = BTreeMap::new();
        for f in &by_size[n - 1] {
            let children = (0..f.len())
                .map(|i| f.blow_up_free(i))
                .chain(f.edges.iter().map(|&e| f.blow_up_node(e)));
            for child in children {
                let c = child.canonical();
                next.entry(c.canonical_key()).or_insert(c);
            }
        }
        by_size[n] = next.into_values().collect();
    }
    Ok(FiberCatalog { by_size })
}

/// Horizontal curves available to meet a fiber: ordinary sections and
/// 2-sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HorizontalBudget {
    pub max_sections: u32,
    pub max_two_sections: u32,
    pub max_total: u32,
    /// Use exactly `max_sections` sections and `max_two_sections` 2-sections.
    pub exact: bool,
}

impl HorizontalBudget {
    /// At most four horizontal curves, at most one of them a 2-section.
    pub const AT_MOST_FOUR: HorizontalBudget =
        HorizontalBudget { max_sections: 4, max_two_sections: 1, max_total: 4, exact: false };
    /// Exactly two sections and one 2-section.
    pub const TWO_PLUS_ONE: HorizontalBudget =
        HorizontalBudget { max_sections: 2, max_two_sections: 1, max_total: 3, exact: true };

    fn shapes(&self) -> Vec<(u32, u32)> {
        if self.exact {
            return vec![(self.max_sections, self.max_two_sections)];
        }
        let mut out = Vec::new();
        for t in 0..=self.max_two_sections {
            for s in 0..=self.max_sections {
                if s + t <= self.max_total {
                    out.push((s, t));
                }
            }
        }
        out
    }

    pub fn name(&self) -> String {
        if self.exact {
            format!("{} sections + {} two-section", self.max_sections, self.max_two_sections)
        } else {
            format!("<= {} horizontals, <= {} two-section", self.max_total, self.max_two_sections)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiberContext {
    pub budget: HorizontalBudget,
    /// Complete chains of other singular points that may lie in the fiber,
    /// each at most once.
    pub catalog: Vec<Chain>,
    pub max_components: usize,
}

/// How one horizontal curve meets the fiber: `(component, intersection)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Horizontal {
    pub degree: u32,
    pub hits: Vec<(usize, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// Component `j` (0-based) of fragment `k`.
    Fragment { k: usize, j: usize },
    /// Part of a complete chain from the catalog.
    Catalog(usize),
    /// Part of a chain that also has horizontal components.
    Piece,
    MinusOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnnotatedFiber {
    pub config: FiberConfig,
    pub roles: Vec<Role>,
    pub horizontals: Vec<Horizontal>,
}

impl AnnotatedFiber {
    fn names(&self) -> Vec<String> {
        let frag_len: BTreeMap<usize, usize> = self.roles.iter().fold(BTreeMap::new(), |mut m, r| {
            if let Role::Fragment { k, .. } = r {
                *m.entry(*k).or_insert(0) += 1;
            }
            m
        });
        let order = self.display_order();
        let others = order.iter().filter(|&&i| matches!(self.roles[i], Role::Catalog(_) | Role::Piece)).count();
        let mut names = vec![String::new(); self.config.len()];
        let (mut e, mut c) = (0, 0);
        for &i in &order {
            names[i] = match self.roles[i] {
                Role::Fragment { k, j } => {
                    let base = if k == 0 { "A".to_string() } else { format!("A'{k}") };
                    if frag_len[&k] == 1 { base } else { format!("{base}{}", j + 1) }
                }
                Role::MinusOne => {
                    e += 1;
                    format!("E{e}")
                }
                _ if others == 1 => "B".to_string(),
                _ => {
                    c += 1;
                    format!("C{c}")
                }
            };
        }
        names
    }

    /// Path order starting from the end nearer the first fragment component.
    fn display_order(&self) -> Vec<usize> {
        match self.config.path_order() {
            Some(o) => {
                let mut r = o.clone();
                r.reverse();
                let first_frag = |v: &[usize]| v.iter().position(|&i| matches!(self.roles[i], Role::Fragment { .. }));
                let key = |v: &[usize]| (first_frag(v), v.iter().map(|&i| self.config.components[i]).collect::<Vec<_>>());
                if key(&r) < key(&o) { r } else { o }
            }
            None => (0..self.config.len()).collect(),
        }
    }

    /// `s1.E1=1, s2.E1=1, s.E2=1`, sections first.
    pub fn hits_string(&self) -> String {
        let names = self.names();
        let mut parts = Vec::new();
        let sections = self.horizontals.iter().filter(|h| h.degree == 1).count();
        let (mut si, mut ti) = (0, 0);
        for h in &self.horizontals {
            let name = if h.degree == 1 {
                si += 1;
                if sections == 1 { "s1".to_string() } else { format!("s{si}") }
            } else {
                ti += 1;
                if ti == 1 { "s".to_string() } else { format!("s'{ti}") }
            };
            for &(c, m) in &h.hits {
                parts.push(format!("{name}.{}={m}", names[c]));
            }
        }
        parts.join(", ")
    }
}

impl fmt::Display for AnnotatedFiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order = self.config.path_order().map(|_| self.display_order());
        self.config.format_with(&self.names(), order, f)
    }
}

/// Connected components of the curves with `C^2 <= -2`, each as a path
/// (or `None` if it branches).
fn d_components(f: &FiberConfig) -> Vec<Option<Vec<usize>>> {
    let is_d = |i: usize| f.components[i].self_intersection <= -2;
    let mut seen = vec![false; f.len()];
    let mut out = Vec::new();
    for s in 0..f.len() {
        if seen[s] || !is_d(s) {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            for w in f.neighbors(comp[k]) {
                if is_d(w) && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            k += 1;
        }
        let deg = |v: usize| f.neighbors(v).into_iter().filter(|&w| is_d(w)).count();
        if comp.iter().any(|&v| deg(v) > 2) {
            out.push(None);
            continue;
        }
        let start = *comp.iter().filter(|&&v| deg(v) <= 1).min().unwrap();
        let mut order = vec![start];
        while order.len() < comp.len() {
            let last = *order.last().unwrap();
            let prev = order.len().checked_sub(2).map(|p| order[p]);
            let next = f.neighbors(last).into_iter().find(|&w| is_d(w) && Some(w) != prev).unwrap();
            order.push(next);
        }
        out.push(Some(order));
    }
    out
}

fn weights_of(f: &FiberConfig, path: &[usize]) -> Vec<u32> {
    path.iter().map(|&i| f.components[i].weight() as u32).collect()
}

/// `path` read in the orientation matching `chain`, if any.
fn oriented(f: &FiberConfig, path: &[usize], chain: &Chain) -> Option<Vec<usize>> {
    let w = weights_of(f, path);
    if w == chain.weights() {
        return Some(path.to_vec());
    }
    let mut rev = path.to_vec();
    rev.reverse();
    (weights_of(f, &rev) == chain.weights()).then_some(rev)
}

/// Fibers that contain every fragment as a complete connected piece of `D`,
/// with a witness assignment of horizontal curves.
///
/// Curves with `C^2 <= -2` are taken to lie in `D`. The remaining pieces of
/// `D` in the fiber are either complete catalog chains or pieces of a chain
/// with horizontal components, which must then meet some horizontal curve.
/// Horizontal curves are taken to lie in `D` and never meet complete
/// chains. Each `(-1)`-curve needs `E.D >= 2`, and `E.D >= 3` when it meets
/// a fragment.
pub fn fibers_containing(fragments: &[Chain], ctx: &FiberContext) -> Result<Vec<AnnotatedFiber>> {
    let catalog = enumerate_fibers(ctx.max_components)?;
    let mut out = Vec::new();
    for f in catalog.iter() {
        if let Some(a) = annotate(f, fragments, ctx) {
            out.push(a);
        }
    }
    Ok(out)
}

fn annotate(f: &FiberConfig, fragments: &[Chain], ctx: &FiberContext) -> Option<AnnotatedFiber> {
    let comps: Vec<Vec<usize>> = d_components(f).into_iter().collect::<Option<_>>()?;
    for frag_choice in assign_fragments(f, &comps, fragments, 0, &mut vec![false; comps.len()]) {
        let mut roles = vec![Role::MinusOne; f.len()];
        let mut used = vec![false; comps.len()];
        for (k, (ci, path)) in frag_choice.iter().enumerate() {
            used[*ci] = true;
            for (j, &v) in path.iter().enumerate() {
                roles[v] = Role::Fragment { k, j };
            }
        }
        let rest: Vec<usize> = (0..comps.len()).filter(|&i| !used[i]).collect();
        for catalog_choice in assign_catalog(f, &comps, &rest, &ctx.catalog) {
            let mut roles = roles.clone();
            for (&ci, choice) in rest.iter().zip(&catalog_choice) {
                for &v in &comps[ci] {
                    roles[v] = match choice {
                        Some(idx) => Role::Catalog(*idx),
                        None => Role::Piece,
                    };
                }
            }
            let pieces: Vec<&Vec<usize>> =
                rest.iter().zip(&catalog_choice).filter(|(_, c)| c.is_none()).map(|(&ci, _)| &comps[ci]).collect();
            if let Some(horizontals) = find_horizontals(f, &roles, &pieces, &ctx.budget) {
                return Some(AnnotatedFiber { config: f.clone(), roles, horizontals });
            }
        }
    }
    None
}

fn assign_fragments(
    f: &FiberConfig,
    comps: &[Vec<usize>],
    fragments: &[Chain],
    k: usize,
    used: &mut Vec<bool>,
) -> Vec<Vec<(usize, Vec<usize>)>> {
    if k == fragments.len() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for ci in 0..comps.len() {
        if used[ci] {
            continue;
        }
        if let Some(path) = oriented(f, &comps[ci], &fragments[k]) {
            used[ci] = true;
            for mut tail in assign_fragments(f, comps, fragments, k + 1, used) {
                tail.insert(0, (ci, path.clone()));
                out.push(tail);
            }
            used[ci] = false;
        }
    }
    out
}

/// For each remaining D-component: `Some(catalog index)` or `None` (a piece).
fn assign_catalog(f: &FiberConfig, comps: &[Vec<usize>], rest: &[usize], catalog: &[Chain]) -> Vec<Vec<Option<usize>>> {
    let mut out = vec![Vec::new()];
    for &ci in rest {
        let mut next = Vec::new();
        for partial in &out {
            for (idx, chain) in catalog.iter().enumerate() {
                if !partial.contains(&Some(idx)) && oriented(f, &comps[ci], chain).is_some() {
                    let mut p = partial.clone();
                    p.push(Some(idx));
                    next.push(p);
                }
            }
            let mut p: Vec<Option<usize>> = partial.clone();
            p.push(None);
            next.push(p);
        }
        out = next;
    }
    out
}

fn combinations_with_repetition(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut tail in combinations_with_repetition(&items[i..], k - 1) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

fn find_horizontals(
    f: &FiberConfig,
    roles: &[Role],
    pieces: &[&Vec<usize>],
    budget: &HorizontalBudget,
) -> Option<Vec<Horizontal>> {
    let hittable: Vec<usize> =
        (0..f.len()).filter(|&i| matches!(roles[i], Role::Piece | Role::MinusOne)).collect();
    let mult = |i: usize| f.components[i].multiplicity;
    let section_targets: Vec<usize> = hittable.iter().copied().filter(|&i| mult(i) == 1).collect();
    let mut two_options: Vec<Vec<(usize, u32)>> = Vec::new();
    for (a, &i) in section_targets.iter().enumerate() {
        for &j in &section_targets[a + 1..] {
            two_options.push(vec![(i, 1), (j, 1)]);
        }
        if roles[i] == Role::MinusOne {
            two_options.push(vec![(i, 2)]);
        }
    }
    for &i in &hittable {
        if mult(i) == 2 {
            two_options.push(vec![(i, 1)]);
        }
    }
    two_options.sort();

    for (s, t) in budget.shapes() {
        let twos: Vec<Vec<usize>> = combinations_with_repetition(&(0..two_options.len()).collect::<Vec<_>>(), t as usize);
        for sec in combinations_with_repetition(&section_targets, s as usize) {
            for tw in &twos {
                let mut horizontals: Vec<Horizontal> =
                    sec.iter().map(|&i| Horizontal { degree: 1, hits: vec![(i, 1)] }).collect();
                horizontals.extend(tw.iter().map(|&o| Horizontal { degree: 2, hits: two_options[o].clone() }));
                if admissible(f, roles, pieces, &horizontals) {
                    return Some(horizontals);
                }
            }
        }
    }
    None
}

fn admissible(f: &FiberConfig, roles: &[Role], pieces: &[&Vec<usize>], horizontals: &[Horizontal]) -> bool {
    let mut hits = vec![0u32; f.len()];
    for h in horizontals {
        for &(c, m) in &h.hits {
            hits[c] += m;
        }
    }
    if pieces.iter().any(|p| p.iter().all(|&v| hits[v] == 0)) {
        return false;
    }
    for e in f.minus_one_curves() {
        let nb = f.neighbors(e);
        let d_nbrs = nb.iter().filter(|&&w| roles[w] != Role::MinusOne).count() as u32;
        let meets_fragment = nb.iter().any(|&w| matches!(roles[w], Role::Fragment { .. }));
        let ed = d_nbrs + hits[e];
        if ed < 2 || (meets_fragment && ed < 3) {
            return false;
        }
    }
    true
}

/// The fiber `E1 - A - E2 - B` with weights `1, 3, 1, 2` and multiplicities
/// `1, 1, 2, 1`.
pub fn order_three_single_b() -> FiberConfig {
    "E1(-1,1) - A(-3,1) - E2(-1,2) - B(-2,1)".parse().expect("valid fiber")
}

/// `E1 - A - E2 - C1 - E3 - C2` with weights `1, 3, 1, 4, 1, 2`.
pub fn order_three_chain_b() -> FiberConfig {
    "E1(-1,1) - A(-3,1) - E2(-1,2) - C1(-4,1) - E3(-1,2) - C2(-2,1)".parse().expect("valid fiber")
}

/// Whether `f` is `E1 - A - E2 - B` with `A` a `(-3)`-curve, `E1` and `E2`
/// of multiplicities one and two, and `B` the chain `(-4) - (-1) - (-2)`
/// (the `(-4)`-curve meeting `E2`) or a chain obtained from it by blowing up
/// nodes on a `(-1)`-curve.
pub fn is_order_three_chain_family(f: &FiberConfig) -> bool {
    let Some(order) = f.path_order() else { return false };
    let target: Vec<Component> = order_three_chain_b().components().to_vec();
    let seq: Vec<Component> = order.iter().map(|&i| f.components[i]).collect();
    let mut rev = seq.clone();
    rev.reverse();
    [seq, rev].into_iter().any(|s| reduces_to(&s, &target))
}

fn reduces_to(seq: &[Component], target: &[Component]) -> bool {
    if seq == target {
        return true;
    }
    if seq.len() <= target.len() || seq[..3] != target[..3] {
        return false;
    }
    // interior (-1)-curves of B, strictly after C1
    for e in 4..seq.len() - 1 {
        if !seq[e].is_minus_one() {
            continue;
        }
        let (a, b) = (seq[e - 1], seq[e + 1]);
        let (a2, b2) = (a.self_intersection + 1, b.self_intersection + 1);
        if a2 != -1 && b2 != -1 {
            continue;
        }
        if a.multiplicity + b.multiplicity != seq[e].multiplicity {
            continue;
        }
        let mut next = seq.to_vec();
        next[e - 1].self_intersection = a2;
        next[e + 1].self_intersection = b2;
        next.remove(e);
        if reduces_to(&next, target) {
            return true;
        }
    }
    false
}

/// Splits `f` as `E1 - A - E2 - B` with `A` a `(-3)`-curve of
/// multiplicity one meeting only `E1` (a leaf of multiplicity one) and `E2`
/// (multiplicity two), returning the components of `B` (those beyond `E2`).
pub fn order_three_split(f: &FiberConfig) -> Option<Vec<usize>> {
    for a in 0..f.len() {
        if f.components[a] != Component::new(-3, 1) {
            continue;
        }
        let nb = f.neighbors(a);
        let [x, y] = nb[..] else { continue };
        for (e1, e2) in [(x, y), (y, x)] {
            let ok = f.components[e1] == Component::new(-1, 1)
                && f.neighbors(e1).len() == 1
                && f.components[e2] == Component::new(-1, 2);
            if !ok {
                continue;
            }
            let mut b: Vec<usize> = Vec::new();
            let mut stack: Vec<usize> = f.neighbors(e2).into_iter().filter(|&w| w != a).collect();
            let mut seen = vec![false; f.len()];
            seen[e2] = true;
            while let Some(v) = stack.pop() {
                if !seen[v] {
                    seen[v] = true;
                    b.push(v);
                    stack.extend(f.neighbors(v));
                }
            }
            b.sort_unstable();
            return Some(b);
        }
    }
    None
}

/// Self-intersection of the divisor `sum m_i C_i` over `subset`.
pub fn divisor_square(f: &FiberConfig, subset: &[usize]) -> i64 {
    let m = |i: usize| f.components[i].multiplicity as i64;
    let diag: i64 = subset.iter().map(|&i| m(i) * m(i) * f.components[i].self_intersection).sum();
    let off: i64 = f
        .edges
        .iter()
        .filter(|(a, b)| subset.contains(a) && subset.contains(b))
        .map(|&(a, b)| 2 * m(a) * m(b))
        .sum();
    diag + off
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    /// `E1 - A - E2 - B` with `B` a single `(-2)`-curve.
    SingleB,
    /// `E1 - A - E2 - B` with `B` a tree of several curves and `B^2 = -2`.
    TreeB,
    /// `E1 - A1 - A2 - A3 - A4 - E2`, all of multiplicity one.
    A4Between,
    /// `E1 - A1 - A2 - E2 - B` with weights `1, 2, 3, 1, 2`.
    TwoThreeWithB,
    Other,
}

impl Shape {
    pub fn id(self) -> &'static str {
        match self {
            Shape::SingleB => "E1-A-2E2-B",
            Shape::TreeB => "E1-A-2E2-B(tree,B^2=-2)",
            Shape::A4Between => "E1-A1-A2-A3-A4-E2",
            Shape::TwoThreeWithB => "E1-A1-A2-2E2-B",
            Shape::Other => "other",
        }
    }

    pub fn of(f: &FiberConfig) -> Shape {
        let key = f.canonical_key();
        let is = |s: &str| s.parse::<FiberConfig>().expect("valid fiber").canonical_key() == key;
        if let Some(b) = order_three_split(f) {
            if divisor_square(f, &b) == -2 {
                return if b.len() == 1 { Shape::SingleB } else { Shape::TreeB };
            }
        }
        if is("(-1,1) - (-2,1) - (-2,1) - (-2,1) - (-2,1) - (-1,1)") {
            Shape::A4Between
        } else if is("(-1,1) - (-2,1) - (-3,1) - (-1,2) - (-2,1)") {
            Shape::TwoThreeWithB
        } else {
            Shape::Other
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberLemmaCase {
    pub id: &'static str,
    pub fragment: Chain,
    pub budget: HorizontalBudget,
    pub found: Vec<AnnotatedFiber>,
    /// Shapes that must each appear at least once; `None` for runs that are
    /// reported without an expectation.
    pub expected: Option<BTreeSet<Shape>>,
}

impl FiberLemmaCase {
    pub fn shapes(&self) -> BTreeSet<Shape> {
        self.found.iter().map(|a| Shape::of(&a.config)).collect()
    }

    pub fn missing(&self) -> Vec<Shape> {
        let got = self.shapes();
        self.expected.as_ref().map_or_else(Vec::new, |e| e.difference(&got).copied().collect())
    }

    /// Found fibers whose shape is not expected.
    pub fn extra(&self) -> Vec<&AnnotatedFiber> {
        match &self.expected {
            None => Vec::new(),
            Some(e) => self.found.iter().filter(|a| !e.contains(&Shape::of(&a.config))).collect(),
        }
    }

    pub fn passes(&self) -> bool {
        self.expected.is_none() || (self.missing().is_empty() && self.extra().is_empty())
    }

    /// Fibers of shape [`Shape::TreeB`] whose `B` is not in the blow-up
    /// family of [`is_order_three_chain_family`].
    pub fn outside_chain_family(&self) -> Vec<&AnnotatedFiber> {
        self.found
            .iter()
            .filter(|a| Shape::of(&a.config) == Shape::TreeB && !is_order_three_chain_family(&a.config))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberLemmaReport {
    pub max_components: usize,
    pub cases: Vec<FiberLemmaCase>,
}

impl FiberLemmaReport {
    pub fn passes(&self) -> bool {
        self.cases.iter().all(FiberLemmaCase::passes)
    }
}

/// Chains of the singular points of orders 2 and 3 and the three
/// candidates of order 5.
fn order_chains() -> (Chain, Chain, [Chain; 3]) {
    let c = |w: &[u32]| Chain::new(w.to_vec()).expect("valid chain");
    (c(&[2]), c(&[3]), [c(&[2, 2, 2, 2]), c(&[2, 3]), c(&[5])])
}

/// Runs [`fibers_containing`] on the order-3 chain and the three order-5
/// chains under both horizontal budgets.
pub fn verify_fiber_lemmas(max_components: usize) -> Result<FiberLemmaReport> {
    let (a1, t3, fives) = order_chains();
    let shapes = |s: &[Shape]| Some(s.iter().copied().collect::<BTreeSet<_>>());
    let mut cases = Vec::new();

    let mut order3_catalog = vec![a1.clone()];
    order3_catalog.extend(fives.iter().cloned());
    for (budget, expected) in [
        (HorizontalBudget::AT_MOST_FOUR, shapes(&[Shape::SingleB, Shape::TreeB])),
        (HorizontalBudget::TWO_PLUS_ONE, shapes(&[Shape::SingleB])),
    ] {
        let ctx = FiberContext { budget, catalog: order3_catalog.clone(), max_components };
        cases.push(FiberLemmaCase {
            id: "order3",
            fragment: t3.clone(),
            budget,
            found: fibers_containing(core::slice::from_ref(&t3), &ctx)?,
            expected,
        });
    }

    let order5_expected = [shapes(&[Shape::A4Between]), shapes(&[Shape::TwoThreeWithB]), shapes(&[])];
    for (chain, expected) in fives.iter().zip(order5_expected) {
        for budget in [HorizontalBudget::TWO_PLUS_ONE, HorizontalBudget::AT_MOST_FOUR] {
            let ctx = FiberContext { budget, catalog: vec![a1.clone(), t3.clone()], max_components };
            cases.push(FiberLemmaCase {
                id: "order5",
                fragment: chain.clone(),
                budget,
                found: fibers_containing(core::slice::from_ref(chain), &ctx)?,
                expected: if budget.exact { expected.clone() } else { None },
            });
        }
    }
    Ok(FiberLemmaReport { max_components, cases })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_enumeration() {
        let cat = enumerate_fibers(3).unwrap();
        assert_eq!(cat.counts(), vec![0, 0, 1, 2]);
        let keys: BTreeSet<String> = cat.with_components(3).iter().map(FiberConfig::canonical_key).collect();
        let expect: BTreeSet<String> = ["(-2,1) - (-1,2) - (-2,1)", "(-1,1) - (-2,1) - (-1,1)"]
            .iter()
            .map(|s| s.parse::<FiberConfig>().unwrap().canonical_key())
            .collect();
        assert_eq!(keys, expect);
        assert!(enumerate_fibers(11).is_err());
        assert!(enumerate_fibers(1).unwrap().is_empty());
    }

    #[test]
    fn generated_fibers_are_fibers() {
        let cat = enumerate_fibers(7).unwrap();
        for f in cat.iter() {
            assert!(f.is_numerically_fiber());
            assert_eq!(f.f_squared(), 0);
            assert_eq!(f.k_dot_f(), -2);
            let ones = f.minus_one_curves();
            assert!(!ones.is_empty());
            if ones.len() == 1 {
                assert!(f.components[ones[0]].multiplicity >= 2);
            }
            for e in ones {
                assert!(f.neighbors(e).len() <= 2);
            }
            assert_eq!(f.canonical(), *f);
        }
    }

    #[test]
    fn canonical_key_ignores_labelling() {
        let f = order_three_chain_b();
        let mut comps = f.components.clone();
        comps.reverse();
        let n = comps.len();
        let edges = f.edges.iter().map(|&(a, b)| (n - 1 - a, n - 1 - b)).collect();
        let g = FiberConfig::new(comps, edges).unwrap();
        assert_eq!(f.canonical_key(), g.canonical_key());
        assert_eq!(f.canonical(), g.canonical());
    }

    #[test]
    fn contraction_inverts_blow_up() {
        let f = order_three_single_b();
        for i in 0..f.len() {
            let g = f.blow_up_free(i);
            assert_eq!(g.contract(g.len() - 1).unwrap(), f);
        }
        for &e in f.edges() {
            let g = f.blow_up_node(e);
            assert_eq!(g.contract(g.len() - 1).unwrap().canonical_key(), f.canonical_key());
        }
    }

    #[test]
    fn parse_and_print() {
        let f = order_three_single_b();
        assert_eq!(f.to_string(), "E1(-1,1) - C1(-3,1) - E2(-1,2) - C2(-2,1)");
        assert_eq!(f.to_string().parse::<FiberConfig>().unwrap(), f);
        let star = FiberConfig::new(
            vec![Component::new(-2, 1), Component::new(-2, 1), Component::new(-1, 2), Component::new(-2, 1)],
            vec![(0, 2), (1, 2), (2, 3)],
        );
        assert!(star.is_err()); // F.E2 = -2 + 3 != 0
        assert_eq!(
            "(-1,1) - (-1,1) - (-1,1); edges 1-2 2-3 3-1".parse::<FiberConfig>(),
            Err(Error::CyclicFiber)
        );
        assert!("(-1,1) - (-2,1)".parse::<FiberConfig>().is_err());
        let g: FiberConfig = "E1(-1,2), A(-3,1), E2(-1,1), C1(-5,1), E3(-1,1), E4(-1,2), C2(-2,1); edges 1-2 1-4 2-3 4-5 4-6 6-7"
            .parse()
            .unwrap();
        assert!(g.path_order().is_none());
        assert_eq!(g.to_string().parse::<FiberConfig>().unwrap(), g);
    }

    #[test]
    fn chain_family_membership() {
        assert!(is_order_three_chain_family(&order_three_chain_b()));
        let f = order_three_chain_b();
        // blow up the node between C1 and E3, then the node between the new
        // curve and E3
        let g = f.blow_up_node((3, 4));
        assert!(is_order_three_chain_family(&g));
        assert!(!is_order_three_chain_family(&order_three_single_b()));
        let h = f.blow_up_node((1, 2));
        assert!(!is_order_three_chain_family(&h));
    }

    #[test]
    fn order_five_shapes() {
        let (a1, t3, fives) = order_chains();
        let ctx = FiberContext {
            budget: HorizontalBudget::TWO_PLUS_ONE,
            catalog: vec![a1, t3],
            max_components: 7,
        };
        let a4 = fibers_containing(&fives[0..1], &ctx).unwrap();
        assert_eq!(a4.len(), 1);
        assert_eq!(a4[0].to_string(), "E1(-1,1) - A1(-2,1) - A2(-2,1) - A3(-2,1) - A4(-2,1) - E2(-1,1)");
        assert_eq!(a4[0].hits_string(), "s1.E1=1, s2.E1=1, s.E2=2");

        let t = fibers_containing(&fives[1..2], &ctx).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].to_string(), "E1(-1,1) - A1(-2,1) - A2(-3,1) - E2(-1,2) - B(-2,1)");
        assert_eq!(t[0].hits_string(), "s1.E1=1, s2.E1=1, s.E2=1");

        assert!(fibers_containing(&fives[2..3], &ctx).unwrap().is_empty());
    }

    #[test]
    fn order_three_shapes() {
        let (a1, t3, fives) = order_chains();
        let mut catalog = vec![a1];
        catalog.extend(fives);
        let ctx = FiberContext { budget: HorizontalBudget::AT_MOST_FOUR, catalog, max_components: 7 };
        let found = fibers_containing(core::slice::from_ref(&t3), &ctx).unwrap();
        let shapes: BTreeSet<Shape> = found.iter().map(|a| Shape::of(&a.config)).collect();
        assert_eq!(shapes, [Shape::SingleB, Shape::TreeB].into_iter().collect());
        let single = found.iter().find(|a| Shape::of(&a.config) == Shape::SingleB).unwrap();
        assert_eq!(single.to_string(), "E1(-1,1) - A(-3,1) - E2(-1,2) - B(-2,1)");
        assert_eq!(single.hits_string(), "s1.E1=1, s2.E1=1, s.E2=1");
    }
}
