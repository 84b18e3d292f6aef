//! Labeled trees, one-hole contexts and metavariable substitution.
//!
//! Types, typing contexts and typing judgements are all represented as
//! trees over a fixed label set. A [`Tooth`] is a single node with one child
//! position left open, and a [`Path`] is a sequence of teeth stored innermost
//! first. [`MetaSubst`] instantiates typing-rule patterns, which mention
//! [`Label::Meta`] leaves, into concrete trees.

pub mod sexp;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Identifier carried by context-extension labels and terms.
pub type Name = Arc<str>;

/// Errors raised while building or instantiating trees.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("label {label} expects {expected} children, got {actual}")]
    Arity {
        label: Label,
        expected: usize,
        actual: usize,
    },
    #[error("hole index {index} out of range for label {label}")]
    HoleIndex { label: Label, index: usize },
    #[error("unbound metavariable ?m{0}")]
    UnboundMeta(u32),
}

/// Node labels of the tree language.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Arrow,
    Int,
    Bool,
    List,
    TyHole(u64),
    EmptyCtx,
    CtxExtend(Name),
    Turnstile,
    Meta(u32),
}

impl Label {
    /// Number of children a node with this label carries.
    pub fn arity(&self) -> usize {
        match self {
            Label::Arrow | Label::CtxExtend(_) | Label::Turnstile => 2,
            Label::List => 1,
            Label::Int | Label::Bool | Label::TyHole(_) | Label::EmptyCtx | Label::Meta(_) => 0,
        }
    }

    /// Head symbol used when printing a node or tooth with this label.
    fn head(&self) -> String {
        match self {
            Label::Arrow => "->".into(),
            Label::Int => "Int".into(),
            Label::Bool => "Bool".into(),
            Label::List => "List".into(),
            Label::TyHole(n) => format!("? {n}"),
            Label::EmptyCtx => "empty".into(),
            Label::CtxExtend(x) => format!("ext {x}"),
            Label::Turnstile => "|-".into(),
            Label::Meta(n) => format!("meta {n}"),
        }
    }
}

impl fmt::Display for Label {
    /// Prints the label on its own, as used inside `(congr <label> ...)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::TyHole(_) | Label::CtxExtend(_) | Label::Meta(_) => write!(f, "({})", self.head()),
            _ => f.write_str(&self.head()),
        }
    }
}

#[derive(Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Node {
    label: Label,
    children: Vec<Tree>,
}

/// An immutable labeled tree whose child count always matches its label's arity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree(Arc<Node>);

impl Tree {
    /// Builds a node, checking the child count against the label arity.
    pub fn new(label: Label, children: Vec<Tree>) -> Result<Tree, TreeError> {
        if children.len() != label.arity() {
            return Err(TreeError::Arity {
                expected: label.arity(),
                actual: children.len(),
                label,
            });
        }
        Ok(Tree(Arc::new(Node { label, children })))
    }

    /// Builds a node whose arity is known to be correct by construction.
    ///
    /// # Panics
    /// Panics when the child count does not match the label arity.
    pub fn node(label: Label, children: Vec<Tree>) -> Tree {
        Tree::new(label, children).expect("arity mismatch in Tree::node")
    }

    pub fn leaf(label: Label) -> Tree {
        Tree::node(label, Vec::new())
    }

    pub fn int() -> Tree {
        Tree::leaf(Label::Int)
    }

    pub fn bool() -> Tree {
        Tree::leaf(Label::Bool)
    }

    pub fn arrow(dom: Tree, cod: Tree) -> Tree {
        Tree::node(Label::Arrow, vec![dom, cod])
    }

    pub fn list(elem: Tree) -> Tree {
        Tree::node(Label::List, vec![elem])
    }

    pub fn ty_hole(id: u64) -> Tree {
        Tree::leaf(Label::TyHole(id))
    }

    pub fn empty_ctx() -> Tree {
        Tree::leaf(Label::EmptyCtx)
    }

    pub fn ctx_extend(rest: Tree, name: Name, ty: Tree) -> Tree {
        Tree::node(Label::CtxExtend(name), vec![rest, ty])
    }

    pub fn turnstile(ctx: Tree, ty: Tree) -> Tree {
        Tree::node(Label::Turnstile, vec![ctx, ty])
    }

    pub fn meta(id: u32) -> Tree {
        Tree::leaf(Label::Meta(id))
    }

    pub fn label(&self) -> &Label {
        &self.0.label
    }

    pub fn children(&self) -> &[Tree] {
        &self.0.children
    }

    /// Number of nodes on the longest root-to-leaf spine.
    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(Tree::depth).max().unwrap_or(0)
    }

    /// Total number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Tree::size).sum::<usize>()
    }

    /// True when no `Meta` label occurs anywhere in the tree.
    pub fn is_concrete(&self) -> bool {
        !matches!(self.label(), Label::Meta(_)) && self.children().iter().all(Tree::is_concrete)
    }

    /// Collects the metavariables occurring in the tree.
    pub fn metas(&self) -> std::collections::BTreeSet<u32> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_metas(&mut out);
        out
    }

    fn collect_metas(&self, out: &mut std::collections::BTreeSet<u32>) {
        if let Label::Meta(m) = self.label() {
            out.insert(*m);
        }
        for c in self.children() {
            c.collect_metas(out);
        }
    }

    /// Follows a sequence of child indices from the root.
    pub fn at(&self, positions: &[usize]) -> Option<&Tree> {
        let mut cur = self;
        for &i in positions {
            cur = cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Splits the tree at the given child index into a tooth and the child.
    pub fn unplug(&self, index: usize) -> Option<(Tooth, Tree)> {
        let child = self.children().get(index)?.clone();
        let mut others = self.children().to_vec();
        others.remove(index);
        Some((
            Tooth {
                label: self.label().clone(),
                hole: index,
                others,
            },
            child,
        ))
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Tree {
    /// Canonical S-expression form, e.g. `(-> Int (List Bool))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = self.label();
        if self.children().is_empty() {
            return write!(f, "{label}");
        }
        write!(f, "({}", label.head())?;
        for c in self.children() {
            write!(f, " {c}")?;
        }
        f.write_str(")")
    }
}

/// One step of a one-hole context: a node with one child position open.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tooth {
    label: Label,
    hole: usize,
    others: Vec<Tree>,
}

impl Tooth {
    /// Builds a tooth, checking the hole index and the number of other children.
    pub fn new(label: Label, hole: usize, others: Vec<Tree>) -> Result<Tooth, TreeError> {
        let arity = label.arity();
        if hole >= arity {
            return Err(TreeError::HoleIndex { label, index: hole });
        }
        if others.len() + 1 != arity {
            return Err(TreeError::Arity {
                expected: arity,
                actual: others.len() + 1,
                label,
            });
        }
        Ok(Tooth { label, hole, others })
    }

    pub fn label(&self) -> &Label {
        &self.label
    }

    pub fn hole(&self) -> usize {
        self.hole
    }

    pub fn others(&self) -> &[Tree] {
        &self.others
    }

    /// The tooth `A -> _`, inserting an argument type in front of a codomain.
    pub fn arrow_cod(dom: Tree) -> Tooth {
        Tooth {
            label: Label::Arrow,
            hole: 1,
            others: vec![dom],
        }
    }

    /// The tooth `_, x : T`, extending a context with one binding.
    pub fn ctx_extend(name: Name, ty: Tree) -> Tooth {
        Tooth {
            label: Label::CtxExtend(name),
            hole: 0,
            others: vec![ty],
        }
    }

    /// Fills the hole with `t`.
    pub fn plug(&self, t: Tree) -> Tree {
        let mut children = self.others.clone();
        children.insert(self.hole, t);
        Tree::node(self.label.clone(), children)
    }

    /// Rebuilds the tooth with new sibling trees.
    pub fn with_others(&self, others: Vec<Tree>) -> Tooth {
        assert_eq!(others.len(), self.others.len(), "tooth sibling count");
        Tooth {
            label: self.label.clone(),
            hole: self.hole,
            others,
        }
    }

    /// Applies a metavariable substitution to the sibling trees.
    pub fn subst_meta(&self, sigma: &MetaSubst) -> Result<Tooth, TreeError> {
        let others = self
            .others
            .iter()
            .map(|t| subst_meta(t, sigma))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.with_others(others))
    }
}

impl fmt::Debug for Tooth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Tooth {
    /// Prints the tooth with `_` marking the hole, e.g. `(-> Int _)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.label.head())?;
        let mut others = self.others.iter();
        for i in 0..self.label.arity() {
            if i == self.hole {
                f.write_str(" _")?;
            } else if let Some(o) = others.next() {
                write!(f, " {o}")?;
            }
        }
        f.write_str(")")
    }
}

/// A one-hole context as a list of teeth, innermost first.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct Path {
    pub teeth: Vec<Tooth>,
}

impl Path {
    pub fn empty() -> Path {
        Path { teeth: Vec::new() }
    }

    pub fn new(teeth: Vec<Tooth>) -> Path {
        Path { teeth }
    }

    pub fn is_empty(&self) -> bool {
        self.teeth.is_empty()
    }

    pub fn len(&self) -> usize {
        self.teeth.len()
    }
}

/// Fills the hole of `path` with `t`, producing `C[t]`.
pub fn plug(path: &Path, t: Tree) -> Tree {
    path.teeth.iter().fold(t, |acc, tooth| tooth.plug(acc))
}

/// Nests `inner` inside `outer`, so that plugging the result equals
/// plugging `inner` first and then `outer`.
pub fn path_concat(outer: &Path, inner: &Path) -> Path {
    let mut teeth = inner.teeth.clone();
    teeth.extend(outer.teeth.iter().cloned());
    Path { teeth }
}

/// Bindings from metavariable ids to concrete trees.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct MetaSubst {
    pub bindings: BTreeMap<u32, Tree>,
}

impl MetaSubst {
    pub fn new() -> MetaSubst {
        MetaSubst::default()
    }

    pub fn insert(&mut self, meta: u32, tree: Tree) -> Option<Tree> {
        self.bindings.insert(meta, tree)
    }

    pub fn get(&self, meta: u32) -> Option<&Tree> {
        self.bindings.get(&meta)
    }

    pub fn with(mut self, meta: u32, tree: Tree) -> MetaSubst {
        self.bindings.insert(meta, tree);
        self
    }
}

impl FromIterator<(u32, Tree)> for MetaSubst {
    fn from_iter<I: IntoIterator<Item = (u32, Tree)>>(iter: I) -> Self {
        MetaSubst {
            bindings: iter.into_iter().collect(),
        }
    }
}

/// Replaces every `Meta` leaf of `pattern` by its binding in `sigma`.
pub fn subst_meta(pattern: &Tree, sigma: &MetaSubst) -> Result<Tree, TreeError> {
    if let Label::Meta(m) = pattern.label() {
        return sigma.get(*m).cloned().ok_or(TreeError::UnboundMeta(*m));
    }
    if pattern.is_concrete() {
        return Ok(pattern.clone());
    }
    let children = pattern
        .children()
        .iter()
        .map(|c| subst_meta(c, sigma))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Tree::node(pattern.label().clone(), children))
}

/// Applies a metavariable substitution to every tooth of a path.
pub fn subst_meta_path(path: &Path, sigma: &MetaSubst) -> Result<Path, TreeError> {
    Ok(Path {
        teeth: path
            .teeth
            .iter()
            .map(|t| t.subst_meta(sigma))
            .collect::<Result<Vec<_>, _>>()?,
    })
}
