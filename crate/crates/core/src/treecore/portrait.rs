use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Level, TreeError, ValencySequence, Vertex};
use crate::perm::Perm;

#[derive(Clone, Debug)]
pub(crate) enum Node {
    /// Identity on the whole truncated subtree. `certified` records that the
    /// untruncated automorphism is known to be the identity too.
    Trivial { certified: bool },
    /// Never the identity within the truncated subtree (kept normalized).
    Branch { perm: Perm, children: Vec<Arc<Node>> },
}

pub(crate) fn trivial(certified: bool) -> Arc<Node> {
    thread_local! {
        static CERT: Arc<Node> = Arc::new(Node::Trivial { certified: true });
        static UNCERT: Arc<Node> = Arc::new(Node::Trivial { certified: false });
    }
    if certified {
        CERT.with(Arc::clone)
    } else {
        UNCERT.with(Arc::clone)
    }
}

impl Node {
    fn certified(&self) -> bool {
        matches!(self, Node::Trivial { certified: true })
    }

    fn child(self: &Arc<Node>, x: usize) -> Arc<Node> {
        match &**self {
            Node::Trivial { certified } => trivial(*certified),
            Node::Branch { children, .. } => children[x].clone(),
        }
    }

    fn perm_image(&self, x: usize) -> usize {
        match self {
            Node::Trivial { .. } => x,
            Node::Branch { perm, .. } => perm.image(x),
        }
    }
}

/// Collapses a branch whose permutation and children are all trivial.
pub(crate) fn branch(perm: Perm, children: Vec<Arc<Node>>) -> Arc<Node> {
    let all_trivial = children.iter().all(|c| matches!(**c, Node::Trivial { .. }));
    if perm.is_identity() && all_trivial {
        trivial(children.iter().all(|c| c.certified()))
    } else {
        Arc::new(Node::Branch { perm, children })
    }
}

fn truncate_node(node: &Arc<Node>, rem: usize) -> Arc<Node> {
    match &**node {
        Node::Trivial { .. } => node.clone(),
        Node::Branch { .. } if rem == 0 => trivial(false),
        Node::Branch { perm, children } => branch(
            perm.clone(),
            children.iter().map(|c| truncate_node(c, rem - 1)).collect(),
        ),
    }
}

fn compose_node(a: &Arc<Node>, b: &Arc<Node>, rem: usize, val: &ValencySequence, k: usize) -> Arc<Node> {
    if rem == 0 {
        return trivial(a.certified() && b.certified());
    }
    match (&**a, &**b) {
        (Node::Trivial { certified: true }, _) => truncate_node(b, rem),
        (_, Node::Trivial { certified: true }) => truncate_node(a, rem),
        (Node::Trivial { .. }, Node::Trivial { .. }) => trivial(false),
        _ => {
            let d = val.degree(k + 1);
            let pa = node_perm(a, d);
            let pb = node_perm(b, d);
            let children = (0..d)
                .map(|x| compose_node(&a.child(x), &b.child(pa.image(x)), rem - 1, val, k + 1))
                .collect();
            branch(pa.then(&pb), children)
        }
    }
}

fn node_perm(node: &Node, d: usize) -> Perm {
    match node {
        Node::Trivial { .. } => Perm::identity(d),
        Node::Branch { perm, .. } => perm.clone(),
    }
}

fn inverse_node(node: &Arc<Node>) -> Arc<Node> {
    match &**node {
        Node::Trivial { .. } => node.clone(),
        Node::Branch { perm, children } => {
            let inv = perm.inverse();
            let kids = (0..children.len())
                .map(|j| inverse_node(&children[inv.image(j)]))
                .collect();
            Arc::new(Node::Branch { perm: inv, children: kids })
        }
    }
}

fn eq_node(a: &Arc<Node>, b: &Arc<Node>) -> bool {
    if Arc::ptr_eq(a, b) {
        return true;
    }
    match (&**a, &**b) {
        (Node::Trivial { .. }, Node::Trivial { .. }) => true,
        (Node::Branch { perm: p, children: c }, Node::Branch { perm: q, children: e }) => {
            p == q && c.iter().zip(e).all(|(x, y)| eq_node(x, y))
        }
        _ => false,
    }
}

/// Classification of one vertex for [`Portrait::activity_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Activity {
    /// The section is nontrivial within the available depth.
    Active,
    /// The section is a certified identity.
    Inactive,
    /// The section is trivial within the available depth but not certified.
    Undecided,
}

/// Per-level activity breakdown. Vertex lists are in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActivityReport {
    pub level: usize,
    pub active: Vec<Vertex>,
    pub undecided: Vec<Vertex>,
    pub inactive: usize,
}

/// An automorphism of a spherically symmetric tree, known down to `depth`.
///
/// The portrait of `g` stores at each vertex `v` of depth `< depth` the
/// permutation of `v`'s children induced by the section `g_v`. Subtrees on
/// which `g` is trivial are shared, so large sparse portraits are cheap.
#[derive(Clone)]
pub struct Portrait {
    valency: ValencySequence,
    depth: usize,
    root: Arc<Node>,
}

impl PartialEq for Portrait {
    /// Structural equality at a common depth; certification is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.valency == other.valency && self.depth == other.depth && eq_node(&self.root, &other.root)
    }
}

impl Eq for Portrait {}

impl Portrait {
    pub(crate) fn from_node(valency: ValencySequence, depth: usize, root: Arc<Node>) -> Portrait {
        let root = truncate_node(&root, depth);
        Portrait { valency, depth, root }
    }

    /// The identity, certified at every depth.
    pub fn identity(valency: &ValencySequence, depth: usize) -> Portrait {
        Portrait {
            valency: valency.clone(),
            depth,
            root: trivial(true),
        }
    }

    /// The rooted automorphism permuting the root's subtrees by `perm`.
    pub fn rooted(valency: &ValencySequence, depth: usize, perm: Perm) -> Result<Portrait, TreeError> {
        let d = valency.degree(1);
        if perm.degree() != d {
            return Err(TreeError::Malformed(format!(
                "root permutation has degree {}, level 1 has degree {d}",
                perm.degree()
            )));
        }
        if depth == 0 {
            return Ok(Portrait::identity(valency, 0).uncertified());
        }
        Ok(Portrait {
            valency: valency.clone(),
            depth,
            root: branch(perm, vec![trivial(true); d]),
        })
    }

    /// `g = (children) σ`: the automorphism with root permutation `perm` and
    /// the given sections at level 1. All children must share a depth.
    pub fn from_parts(valency: &ValencySequence, perm: Perm, children: Vec<Portrait>) -> Result<Portrait, TreeError> {
        let d = valency.degree(1);
        if perm.degree() != d || children.len() != d {
            return Err(TreeError::Malformed(format!(
                "level 1 has degree {d}, got permutation of degree {} and {} children",
                perm.degree(),
                children.len()
            )));
        }
        let shifted = valency.shift(1);
        let depth = children[0].depth;
        if children.iter().any(|c| c.valency != shifted) {
            return Err(TreeError::ValencyMismatch);
        }
        if children.iter().any(|c| c.depth != depth) {
            return Err(TreeError::Malformed("children of unequal depth".into()));
        }
        Ok(Portrait {
            valency: valency.clone(),
            depth: depth + 1,
            root: branch(perm, children.into_iter().map(|c| c.root).collect()),
        })
    }

    /// A uniformly random automorphism of the depth-`depth` finite tree.
    pub fn random<R: Rng + ?Sized>(valency: &ValencySequence, depth: usize, rng: &mut R) -> Portrait {
        fn go<R: Rng + ?Sized>(val: &ValencySequence, k: usize, rem: usize, rng: &mut R) -> Arc<Node> {
            if rem == 0 {
                return trivial(false);
            }
            let d = val.degree(k + 1);
            let mut images: Vec<usize> = (0..d).collect();
            for i in (1..d).rev() {
                images.swap(i, rng.gen_range(0..=i));
            }
            let children = (0..d).map(|_| go(val, k + 1, rem - 1, rng)).collect();
            branch(Perm::from_images(images).expect("shuffle is a bijection"), children)
        }
        Portrait {
            valency: valency.clone(),
            depth,
            root: go(valency, 0, depth, rng),
        }
    }

    /// Rebuilds the portrait of a level permutation, checking that it
    /// preserves the tree structure.
    pub fn from_level_perm(valency: &ValencySequence, depth: usize, perm: &Perm) -> Result<Portrait, TreeError> {
        let level = Level::new(valency, depth)?;
        if perm.degree() != level.size() {
            return Err(TreeError::Malformed(format!(
                "permutation on {} points, level {depth} has {}",
                perm.degree(),
                level.size()
            )));
        }
        fn go(level: &Level, perm: &Perm, k: usize, src: usize, dst: usize) -> Result<Arc<Node>, TreeError> {
            if k == level.depth() {
                return Ok(trivial(false));
            }
            let bad = || TreeError::Malformed("level permutation is not a tree automorphism".into());
            let d = level.valency().degree(k + 1);
            let child_block = level.block_size(k + 1);
            let mut images = Vec::with_capacity(d);
            let mut children = Vec::with_capacity(d);
            for x in 0..d {
                let s = src + x * child_block;
                let y = perm.image(s).checked_sub(dst).ok_or_else(bad)? / child_block;
                if y >= d {
                    return Err(bad());
                }
                images.push(y);
                children.push(go(level, perm, k + 1, s, dst + y * child_block)?);
            }
            Ok(branch(Perm::from_images(images).map_err(|_| bad())?, children))
        }
        let root = go(&level, perm, 0, 0, 0)?;
        let portrait = Portrait {
            valency: valency.clone(),
            depth,
            root,
        };
        if &portrait.perm_on_level(depth)? != perm {
            return Err(TreeError::Malformed("level permutation is not a tree automorphism".into()));
        }
        Ok(portrait)
    }

    pub fn valency(&self) -> &ValencySequence {
        &self.valency
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Permutation of the root's children (identity for depth 0).
    pub fn root_perm(&self) -> Perm {
        node_perm(&self.root, self.valency.degree(1))
    }

    /// Identity within the available depth.
    pub fn is_identity(&self) -> bool {
        matches!(*self.root, Node::Trivial { .. })
    }

    /// Known to be the identity as an untruncated automorphism.
    pub fn is_certified_identity(&self) -> bool {
        self.root.certified()
    }

    /// Same portrait with identity certification dropped.
    pub fn uncertified(&self) -> Portrait {
        fn go(node: &Arc<Node>) -> Arc<Node> {
            match &**node {
                Node::Trivial { .. } => trivial(false),
                Node::Branch { perm, children } => Arc::new(Node::Branch {
                    perm: perm.clone(),
                    children: children.iter().map(go).collect(),
                }),
            }
        }
        Portrait {
            valency: self.valency.clone(),
            depth: self.depth,
            root: go(&self.root),
        }
    }

    /// The product `pq` (apply `self` first), at the smaller depth.
    pub fn compose(&self, other: &Portrait) -> Result<Portrait, TreeError> {
        if self.valency != other.valency {
            return Err(TreeError::ValencyMismatch);
        }
        let depth = self.depth.min(other.depth);
        Ok(Portrait {
            valency: self.valency.clone(),
            depth,
            root: compose_node(&self.root, &other.root, depth, &self.valency, 0),
        })
    }

    pub fn inverse(&self) -> Portrait {
        Portrait {
            valency: self.valency.clone(),
            depth: self.depth,
            root: inverse_node(&self.root),
        }
    }

    pub fn truncate(&self, depth: usize) -> Portrait {
        let depth = depth.min(self.depth);
        Portrait {
            valency: self.valency.clone(),
            depth,
            root: truncate_node(&self.root, depth),
        }
    }

    fn check_depth(&self, v: &Vertex) -> Result<(), TreeError> {
        if v.depth() > self.depth {
            return Err(TreeError::TooDeep {
                vertex: v.depth(),
                depth: self.depth,
            });
        }
        v.validate(&self.valency)
    }

    /// The image `v·g`.
    pub fn act(&self, v: &Vertex) -> Result<Vertex, TreeError> {
        self.check_depth(v)?;
        let mut node = self.root.clone();
        let mut out = Vec::with_capacity(v.depth());
        for &x in v.digits() {
            out.push(node.perm_image(x));
            node = node.child(x);
        }
        Ok(Vertex::new(out))
    }

    /// The section `g_v`, a portrait of depth `depth − |v|` on the shifted tree.
    pub fn section(&self, v: &Vertex) -> Result<Portrait, TreeError> {
        self.check_depth(v)?;
        let mut node = self.root.clone();
        for &x in v.digits() {
            node = node.child(x);
        }
        Ok(Portrait {
            valency: self.valency.shift(v.depth()),
            depth: self.depth - v.depth(),
            root: node,
        })
    }

    /// Classifies every level-`n` vertex as active, certified inactive or
    /// undecided.
    pub fn activity_report(&self, n: usize) -> Result<ActivityReport, TreeError> {
        if n > self.depth {
            return Err(TreeError::TooDeep {
                vertex: n,
                depth: self.depth,
            });
        }
        let mut report = ActivityReport {
            level: n,
            active: Vec::new(),
            undecided: Vec::new(),
            inactive: 0,
        };
        let mut prefix = Vec::with_capacity(n);
        self.walk_activity(&self.root, 0, n, &mut prefix, &mut report);
        Ok(report)
    }

    fn walk_activity(&self, node: &Arc<Node>, k: usize, n: usize, prefix: &mut Vec<usize>, out: &mut ActivityReport) {
        match &**node {
            Node::Trivial { certified: true } => {
                out.inactive += self.valency.shift(k).level_size(n - k).unwrap_or(usize::MAX);
            }
            Node::Trivial { certified: false } => {
                for tail in Vertex::root().descendants(&self.valency.shift(k), n - k) {
                    let mut d = prefix.clone();
                    d.extend_from_slice(tail.digits());
                    out.undecided.push(Vertex::new(d));
                }
            }
            Node::Branch { children, .. } => {
                if k == n {
                    out.active.push(Vertex::new(prefix.clone()));
                    return;
                }
                for (x, c) in children.iter().enumerate() {
                    prefix.push(x);
                    self.walk_activity(c, k + 1, n, prefix, out);
                    prefix.pop();
                }
            }
        }
    }

    /// `A_g(n)`: level-`n` vertices with nontrivial section. Fails if some
    /// vertex is trivial only within the available depth.
    pub fn activity(&self, n: usize) -> Result<Vec<Vertex>, TreeError> {
        if n >= self.depth && !self.is_certified_identity() {
            return Err(TreeError::TooDeep {
                vertex: n + 1,
                depth: self.depth,
            });
        }
        let report = self.activity_report(n)?;
        if !report.undecided.is_empty() {
            return Err(TreeError::UndecidedActivity {
                level: n,
                undecided: report.undecided.len(),
            });
        }
        Ok(report.active)
    }

    /// The permutation induced on level `n`, indexed as in [`Level`].
    pub fn perm_on_level(&self, n: usize) -> Result<Perm, TreeError> {
        if n > self.depth {
            return Err(TreeError::TooDeep {
                vertex: n,
                depth: self.depth,
            });
        }
        let level = Level::new(&self.valency, n)?;
        let mut images = vec![0u32; level.size()];
        fill_images(&self.root, &level, 0, 0, 0, &mut images);
        Ok(Perm::from_images_unchecked(images))
    }
}

fn fill_images(node: &Arc<Node>, level: &Level, k: usize, src: usize, dst: usize, images: &mut [u32]) {
    match &**node {
        Node::Trivial { .. } => {
            for off in 0..level.block_size(k) {
                images[src + off] = (dst + off) as u32;
            }
        }
        Node::Branch { perm, children } => {
            if k == level.depth() {
                images[src] = dst as u32;
                return;
            }
            let b = level.block_size(k + 1);
            for (x, c) in children.iter().enumerate() {
                fill_images(c, level, k + 1, src + x * b, dst + perm.image(x) * b, images);
            }
        }
    }
}

impl fmt::Debug for Portrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(node: &Arc<Node>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match &**node {
                Node::Trivial { certified: true } => write!(f, "1"),
                Node::Trivial { certified: false } => write!(f, "1?"),
                Node::Branch { perm, children } => {
                    write!(f, "{perm}[")?;
                    for (i, c) in children.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        go(c, f)?;
                    }
                    write!(f, "]")
                }
            }
        }
        write!(f, "Portrait(depth {}: ", self.depth)?;
        go(&self.root, f)?;
        write!(f, ")")
    }
}

/// JSON form of one portrait node. A node with `children: []` above the
/// last level is trivial below its root permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortraitNodeJson {
    pub root_perm: Vec<usize>,
    pub children: Vec<PortraitNodeJson>,
}

/// JSON form of a portrait; `tree` is absent for depth 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortraitJson {
    pub valency: ValencySequence,
    pub depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<PortraitNodeJson>,
}

impl From<&Portrait> for PortraitJson {
    fn from(p: &Portrait) -> Self {
        fn go(node: &Arc<Node>, val: &ValencySequence, k: usize, rem: usize) -> PortraitNodeJson {
            let d = val.degree(k + 1);
            match &**node {
                Node::Branch { perm, children } if rem > 1 => PortraitNodeJson {
                    root_perm: perm.to_vec(),
                    children: children.iter().map(|c| go(c, val, k + 1, rem - 1)).collect(),
                },
                _ => PortraitNodeJson {
                    root_perm: node_perm(node, d).to_vec(),
                    children: Vec::new(),
                },
            }
        }
        PortraitJson {
            valency: p.valency.clone(),
            depth: p.depth,
            tree: (p.depth > 0).then(|| go(&p.root, &p.valency, 0, p.depth)),
        }
    }
}

impl TryFrom<PortraitJson> for Portrait {
    type Error = TreeError;
    fn try_from(j: PortraitJson) -> Result<Self, Self::Error> {
        fn go(node: &PortraitNodeJson, val: &ValencySequence, k: usize, rem: usize) -> Result<Arc<Node>, TreeError> {
            let d = val.degree(k + 1);
            let perm = Perm::from_images(node.root_perm.clone())
                .map_err(|e| TreeError::Malformed(format!("at depth {k}: {e}")))?;
            if perm.degree() != d {
                return Err(TreeError::Malformed(format!(
                    "at depth {k}: permutation of degree {} where degree {d} is required",
                    perm.degree()
                )));
            }
            let children = if node.children.is_empty() {
                vec![trivial(false); d]
            } else if rem == 1 {
                return Err(TreeError::Malformed("children below the last level".into()));
            } else if node.children.len() != d {
                return Err(TreeError::Malformed(format!(
                    "at depth {k}: {} children where {d} are required",
                    node.children.len()
                )));
            } else {
                node.children
                    .iter()
                    .map(|c| go(c, val, k + 1, rem - 1))
                    .collect::<Result<_, _>>()?
            };
            Ok(branch(perm, children))
        }
        let root = match (&j.tree, j.depth) {
            (None, 0) => trivial(false),
            (Some(t), d) if d > 0 => go(t, &j.valency, 0, d)?,
            _ => return Err(TreeError::Malformed("tree must be present exactly when depth > 0".into())),
        };
        Ok(Portrait {
            valency: j.valency,
            depth: j.depth,
            root,
        })
    }
}

impl Serialize for Portrait {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PortraitJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Portrait {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PortraitJson::deserialize(d)?;
        Portrait::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap() -> Perm {
        Perm::from_cycles(2, &[&[0, 1]]).unwrap()
    }

    #[test]
    fn swap_is_an_involution() {
        let val = ValencySequence::binary();
        let s = Portrait::rooted(&val, 4, swap()).unwrap();
        let ss = s.compose(&s).unwrap();
        assert!(ss.is_identity());
        assert!(ss.is_certified_identity());
        assert_eq!(s.act(&"011".parse().unwrap()).unwrap().to_string(), "111");
    }

    #[test]
    fn root_three_cycle_inverse() {
        let val = ValencySequence::regular(3);
        let c = Portrait::rooted(&val, 2, Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap()).unwrap();
        assert_eq!(c.inverse().root_perm(), Perm::from_cycles(3, &[&[0, 2, 1]]).unwrap());
    }

    #[test]
    fn sections_follow_the_recursion() {
        let val = ValencySequence::binary();
        let a = Portrait::rooted(&val.shift(1), 3, swap()).unwrap();
        let id = Portrait::identity(&val.shift(1), 3);
        let g = Portrait::from_parts(&val, Perm::identity(2), vec![a.clone(), id]).unwrap();
        assert_eq!(g.depth(), 4);
        assert_eq!(g.section(&"0".parse().unwrap()).unwrap(), a);
        assert!(g.section(&"1".parse().unwrap()).unwrap().is_certified_identity());
        assert_eq!(g.activity(1).unwrap(), vec![Vertex::new(vec![0])]);
        assert_eq!(g.activity(2).unwrap(), Vec::<Vertex>::new());
        assert!(g.act(&"00000".parse().unwrap()).is_err());
    }

    #[test]
    fn uncertified_trivial_is_undecided() {
        let val = ValencySequence::binary();
        let p = Portrait::identity(&val, 3).uncertified();
        assert!(matches!(p.activity(1), Err(TreeError::UndecidedActivity { .. })));
        let r = p.activity_report(2).unwrap();
        assert_eq!(r.undecided.len(), 4);
        assert!(Portrait::identity(&val, 3).activity(2).unwrap().is_empty());
    }

    #[test]
    fn level_perm_roundtrip() {
        use rand::SeedableRng;
        let val = ValencySequence::new(vec![3], vec![2]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = Portrait::random(&val, 3, &mut rng);
            let lp = p.perm_on_level(3).unwrap();
            let back = Portrait::from_level_perm(&val, 3, &lp).unwrap();
            assert_eq!(back, p);
        }
        let bad = Perm::from_cycles(6, &[&[0, 2]]).unwrap();
        assert!(Portrait::from_level_perm(&val, 2, &bad).is_err());
    }

    #[test]
    fn json_roundtrip() {
        use rand::SeedableRng;
        let val = ValencySequence::binary();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let p = Portrait::random(&val, 3, &mut rng);
        let text = serde_json::to_string(&p).unwrap();
        let q: Portrait = serde_json::from_str(&text).unwrap();
        assert_eq!(p, q);
        let s = Portrait::rooted(&val, 1, swap()).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains(r#""tree":{"root_perm":[1,0],"children":[]}"#));
    }
}
