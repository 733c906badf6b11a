//! Bregman functions, their divergences, and the combinators that build new ones.

mod base;
mod combinators;

pub use base::Base;
pub(crate) use base::DomainShape;
pub use combinators::{direct_sum, scale_plus_linear, sum_of, translate};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{check_dim, Error, Result};
use crate::extended::ExtendedReal;
use crate::norms::NormSpec;
use crate::numerics::{dot, sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainStatus {
    Interior,
    BoundaryInDomain,
    OutsideDomain,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Base(Base),
    Scaled { lambda: f64, inner: Box<EntropySpec> },
    PlusLinear { ell: Vec<f64>, inner: Box<EntropySpec> },
    SumOf(Vec<(f64, EntropySpec)>),
    Translated { z0: Vec<f64>, inner: Box<EntropySpec> },
    DirectSum { blocks: Vec<EntropySpec>, c: f64 },
}

/// A Bregman function on ℝ^dim together with the ambient norm.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropySpec {
    node: Node,
    dim: usize,
    norm: NormSpec,
}

/// The zone as a box of strict coordinate lower bounds (`None` = unbounded).
#[derive(Debug, Clone, PartialEq)]
pub struct ZoneDescriptor {
    pub lower: Vec<Option<f64>>,
}

impl ZoneDescriptor {
    pub fn contains(&self, x: &[f64]) -> bool {
        self.lower.iter().zip(x).all(|(l, &v)| l.map_or(true, |l| v > l))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyMetadata {
    pub essentially_smooth: bool,
    pub legendre: bool,
    pub dom_closed: bool,
    pub zone: ZoneDescriptor,
}

impl EntropySpec {
    pub fn from_base(base: Base, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        base.validate(dim)?;
        let norm = match base {
            Base::L2Lp { p } => NormSpec::lp(p, dim)?,
            Base::Ell2Type { n_split } => NormSpec::mixed(2 * n_split, dim)?,
            _ => NormSpec::euclidean(dim),
        };
        Ok(Self { node: Node::Base(base), dim, norm })
    }

    pub fn bgs(dim: usize) -> Self {
        Self::from_base(Base::Bgs, dim).expect("valid dimension")
    }

    pub fn hct(q: f64, dim: usize) -> Result<Self> {
        Self::from_base(Base::Hct { q }, dim)
    }

    pub fn burg(dim: usize) -> Self {
        Self::from_base(Base::Burg, dim).expect("valid dimension")
    }

    pub fn iterated_log(dim: usize) -> Self {
        Self::from_base(Base::IteratedLog, dim).expect("valid dimension")
    }

    pub fn beta(beta: f64, dim: usize) -> Result<Self> {
        Self::from_base(Base::Beta { beta }, dim)
    }

    pub fn alpha_beta(alpha: f64, beta: f64, dim: usize) -> Result<Self> {
        Self::from_base(Base::AlphaBeta { alpha, beta }, dim)
    }

    pub fn l2lp(p: f64, dim: usize) -> Result<Self> {
        Self::from_base(Base::L2Lp { p }, dim)
    }

    /// `a` is row-major n×n; it is replaced by (A + Aᵀ)/2.
    pub fn quadratic(a: &[f64], dim: usize) -> Result<Self> {
        if a.len() != dim * dim {
            return Err(Error::InvalidParameter(format!(
                "quadratic matrix has {} entries, expected {}",
                a.len(),
                dim * dim
            )));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("quadratic matrix has non-finite entries".into()));
        }
        let m = DMatrix::from_row_slice(dim, dim, a);
        let sym = (&m + m.transpose()) * 0.5;
        let min_eigenvalue = SymmetricEigen::new(sym.clone()).eigenvalues.min();
        let a: Vec<f64> = sym.transpose().iter().copied().collect();
        Self::from_base(Base::Quadratic { a, min_eigenvalue }, dim)
    }

    pub fn identity_quadratic(dim: usize) -> Self {
        let mut a = vec![0.0; dim * dim];
        for i in 0..dim {
            a[i * dim + i] = 1.0;
        }
        Self::quadratic(&a, dim).expect("identity is positive definite")
    }

    /// `pairs` coordinate pairs, so the dimension is `2·pairs`.
    pub fn ell2_type(n_split: usize, pairs: usize) -> Result<Self> {
        Self::from_base(Base::Ell2Type { n_split }, 2 * pairs)
    }

    pub(crate) fn from_node(node: Node, dim: usize, norm: NormSpec) -> Self {
        Self { node, dim, norm }
    }

    /// Replaces the ambient norm (recursively for wrappers that share it).
    pub fn with_norm(mut self, norm: NormSpec) -> Result<Self> {
        if norm.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: norm.dim() });
        }
        self.norm = norm;
        match &mut self.node {
            Node::Scaled { inner, .. } | Node::PlusLinear { inner, .. } | Node::Translated { inner, .. } => {
                **inner = (**inner).clone().with_norm(norm)?;
            }
            Node::SumOf(members) => {
                for (_, m) in members.iter_mut() {
                    *m = m.clone().with_norm(norm)?;
                }
            }
            Node::Base(_) | Node::DirectSum { .. } => {}
        }
        Ok(self)
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm(&self) -> &NormSpec {
        &self.norm
    }

    /// Short label for reports.
    pub fn name(&self) -> String {
        match &self.node {
            Node::Base(b) => match b {
                Base::Bgs => "bgs".into(),
                Base::Hct { q } => format!("hct(q={q})"),
                Base::Burg => "burg".into(),
                Base::IteratedLog => "iterlog".into(),
                Base::Beta { beta } => format!("beta(beta={beta})"),
                Base::AlphaBeta { alpha, beta } => format!("alphabeta(alpha={alpha},beta={beta})"),
                Base::L2Lp { p } => format!("l2lp(p={p})"),
                Base::Quadratic { .. } => "quadratic".into(),
                Base::Ell2Type { n_split } => format!("ell2(n_split={n_split})"),
            },
            Node::Scaled { lambda, inner } => format!("scaled({lambda},{})", inner.name()),
            Node::PlusLinear { inner, .. } => format!("plus_linear({})", inner.name()),
            Node::SumOf(m) => {
                let parts: Vec<String> = m.iter().map(|(w, s)| format!("{w}*{}", s.name())).collect();
                format!("sum({})", parts.join(","))
            }
            Node::Translated { inner, .. } => format!("translated({})", inner.name()),
            Node::DirectSum { blocks, .. } => {
                let parts: Vec<String> = blocks.iter().map(|s| s.name()).collect();
                format!("direct_sum({})", parts.join(","))
            }
        }
    }

    pub fn classify(&self, x: &[f64]) -> Result<DomainStatus> {
        check_dim(x, self.dim)?;
        Ok(self.classify_unchecked(x))
    }

    fn classify_unchecked(&self, x: &[f64]) -> DomainStatus {
        match &self.node {
            Node::Base(b) => b.classify(x),
            Node::Scaled { inner, .. } | Node::PlusLinear { inner, .. } => inner.classify_unchecked(x),
            Node::Translated { z0, inner } => inner.classify_unchecked(&shift(x, z0)),
            Node::SumOf(members) => combine_status(members.iter().map(|(_, m)| m.classify_unchecked(x))),
            Node::DirectSum { blocks, .. } => {
                combine_status(split_blocks(blocks, x).map(|(b, xb)| b.classify_unchecked(xb)))
            }
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<ExtendedReal> {
        check_dim(x, self.dim)?;
        if self.classify_unchecked(x) == DomainStatus::OutsideDomain {
            return Ok(ExtendedReal::PosInfinity);
        }
        self.value_in_domain(x).map(ExtendedReal::finite)
    }

    fn value_in_domain(&self, x: &[f64]) -> Result<f64> {
        Ok(match &self.node {
            Node::Base(b) => b.value(x)?,
            Node::Scaled { lambda, inner } => lambda * inner.value_in_domain(x)?,
            Node::PlusLinear { ell, inner } => inner.value_in_domain(x)? + dot(ell, x),
            Node::Translated { z0, inner } => inner.value_in_domain(&shift(x, z0))?,
            Node::SumOf(members) => {
                let mut s = 0.0;
                for (w, m) in members {
                    s += w * m.value_in_domain(x)?;
                }
                s
            }
            Node::DirectSum { blocks, .. } => {
                let mut s = 0.0;
                for (b, xb) in split_blocks(blocks, x) {
                    s += b.value_in_domain(xb)?;
                }
                s
            }
        })
    }

    pub fn grad(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(x, self.dim)?;
        if self.classify_unchecked(x) != DomainStatus::Interior {
            return Err(Error::NotInInterior);
        }
        self.grad_interior(x)
    }

    fn grad_interior(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(match &self.node {
            Node::Base(b) => b.grad(x)?,
            Node::Scaled { lambda, inner } => inner.grad_interior(x)?.into_iter().map(|g| lambda * g).collect(),
            Node::PlusLinear { ell, inner } => {
                inner.grad_interior(x)?.into_iter().zip(ell).map(|(g, l)| g + l).collect()
            }
            Node::Translated { z0, inner } => inner.grad_interior(&shift(x, z0))?,
            Node::SumOf(members) => {
                let mut acc = vec![0.0; self.dim];
                for (w, m) in members {
                    for (a, g) in acc.iter_mut().zip(m.grad_interior(x)?) {
                        *a += w * g;
                    }
                }
                acc
            }
            Node::DirectSum { blocks, .. } => {
                let mut acc = Vec::with_capacity(self.dim);
                for (b, xb) in split_blocks(blocks, x) {
                    acc.extend(b.grad_interior(xb)?);
                }
                acc
            }
        })
    }

    pub fn hessian_quadform(&self, x: &[f64], w: &[f64]) -> Result<f64> {
        check_dim(x, self.dim)?;
        check_dim(w, self.dim)?;
        if self.classify_unchecked(x) != DomainStatus::Interior {
            return Err(Error::NotInInterior);
        }
        self.hessian_interior(x, w)
    }

    fn hessian_interior(&self, x: &[f64], w: &[f64]) -> Result<f64> {
        Ok(match &self.node {
            Node::Base(b) => b.hessian_quadform(x, w)?,
            Node::Scaled { lambda, inner } => lambda * inner.hessian_interior(x, w)?,
            Node::PlusLinear { inner, .. } => inner.hessian_interior(x, w)?,
            Node::Translated { z0, inner } => inner.hessian_interior(&shift(x, z0), w)?,
            Node::SumOf(members) => {
                let mut s = 0.0;
                for (wt, m) in members {
                    s += wt * m.hessian_interior(x, w)?;
                }
                s
            }
            Node::DirectSum { blocks, .. } => {
                let mut s = 0.0;
                let mut off = 0;
                for b in blocks {
                    let r = off..off + b.dim;
                    s += b.hessian_interior(&x[r.clone()], &w[r])?;
                    off += b.dim;
                }
                s
            }
        })
    }

    /// B(x, y) = b(x) − b(y) − ⟨b′(y), x − y⟩ from `value` and `grad` only.
    pub fn divergence_generic(&self, x: &[f64], y: &[f64]) -> Result<ExtendedReal> {
        check_dim(x, self.dim)?;
        check_dim(y, self.dim)?;
        if !self.pair_in_domain(x, y) {
            return Ok(ExtendedReal::PosInfinity);
        }
        if x == y {
            return Ok(ExtendedReal::Finite(0.0));
        }
        let bx = self.value_in_domain(x)?;
        let by = self.value_in_domain(y)?;
        let g = self.grad_interior(y)?;
        Ok(ExtendedReal::finite(bx - by - dot(&g, &sub(x, y))))
    }

    /// B(x, y) from the closed forms of each catalog entry.
    pub fn divergence_closed(&self, x: &[f64], y: &[f64]) -> Result<ExtendedReal> {
        check_dim(x, self.dim)?;
        check_dim(y, self.dim)?;
        if !self.pair_in_domain(x, y) {
            return Ok(ExtendedReal::PosInfinity);
        }
        if x == y {
            return Ok(ExtendedReal::Finite(0.0));
        }
        self.closed_in_domain(x, y).map(ExtendedReal::finite)
    }

    fn pair_in_domain(&self, x: &[f64], y: &[f64]) -> bool {
        self.classify_unchecked(y) == DomainStatus::Interior
            && self.classify_unchecked(x) != DomainStatus::OutsideDomain
    }

    fn closed_in_domain(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        Ok(match &self.node {
            Node::Base(b) => b.divergence(x, y)?,
            Node::Scaled { lambda, inner } => lambda * inner.closed_in_domain(x, y)?,
            Node::PlusLinear { inner, .. } => inner.closed_in_domain(x, y)?,
            Node::Translated { z0, inner } => inner.closed_in_domain(&shift(x, z0), &shift(y, z0))?,
            Node::SumOf(members) => {
                let mut s = 0.0;
                for (w, m) in members {
                    s += w * m.closed_in_domain(x, y)?;
                }
                s
            }
            Node::DirectSum { blocks, .. } => {
                let mut s = 0.0;
                let mut off = 0;
                for b in blocks {
                    let r = off..off + b.dim;
                    s += b.closed_in_domain(&x[r.clone()], &y[r])?;
                    off += b.dim;
                }
                s
            }
        })
    }

    /// B(x,z) − B(x,y) − B(y,z) − ⟨b′(y) − b′(z), x − y⟩.
    pub fn three_point_residual(&self, x: &[f64], y: &[f64], z: &[f64]) -> Result<f64> {
        check_dim(x, self.dim)?;
        if self.classify_unchecked(x) == DomainStatus::OutsideDomain {
            return Err(Error::InvalidParameter("x must lie in dom(b)".into()));
        }
        let gy = self.grad(y)?;
        let gz = self.grad(z)?;
        let bxz = self.closed_in_domain_or_zero(x, z)?;
        let bxy = self.closed_in_domain_or_zero(x, y)?;
        let byz = self.closed_in_domain_or_zero(y, z)?;
        Ok(bxz - bxy - byz - dot(&sub(&gy, &gz), &sub(x, y)))
    }

    fn closed_in_domain_or_zero(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x == y {
            Ok(0.0)
        } else {
            self.closed_in_domain(x, y)
        }
    }

    pub fn metadata(&self) -> EntropyMetadata {
        match &self.node {
            Node::Base(b) => {
                let (es, legendre) = match *b {
                    Base::Hct { q } => (q < 1.0, q < 1.0),
                    Base::Beta { beta } => (beta <= 1.0, beta <= 1.0),
                    _ => (true, true),
                };
                let lower = match b.shape() {
                    DomainShape::ClosedOrthant | DomainShape::OpenOrthant => Some(0.0),
                    DomainShape::AboveOne => Some(1.0),
                    DomainShape::Whole => None,
                };
                EntropyMetadata {
                    essentially_smooth: es,
                    legendre,
                    dom_closed: !matches!(b.shape(), DomainShape::OpenOrthant | DomainShape::AboveOne),
                    zone: ZoneDescriptor { lower: vec![lower; self.dim] },
                }
            }
            Node::Scaled { inner, .. } | Node::PlusLinear { inner, .. } => inner.metadata(),
            Node::Translated { z0, inner } => {
                let mut m = inner.metadata();
                for (l, z) in m.zone.lower.iter_mut().zip(z0) {
                    *l = l.map(|v| v - z);
                }
                m
            }
            Node::SumOf(members) => {
                let metas: Vec<EntropyMetadata> = members.iter().map(|(_, m)| m.metadata()).collect();
                let mut lower = vec![None; self.dim];
                for m in &metas {
                    for (acc, l) in lower.iter_mut().zip(&m.zone.lower) {
                        *acc = match (*acc, *l) {
                            (Some(a), Some(b)) => Some(f64::max(a, b)),
                            (a, b) => a.or(b),
                        };
                    }
                }
                EntropyMetadata {
                    essentially_smooth: metas.iter().all(|m| m.essentially_smooth),
                    legendre: metas.iter().all(|m| m.legendre),
                    dom_closed: metas.iter().all(|m| m.dom_closed),
                    zone: ZoneDescriptor { lower },
                }
            }
            Node::DirectSum { blocks, .. } => {
                let metas: Vec<EntropyMetadata> = blocks.iter().map(|b| b.metadata()).collect();
                EntropyMetadata {
                    essentially_smooth: metas.iter().all(|m| m.essentially_smooth),
                    legendre: metas.iter().all(|m| m.legendre),
                    dom_closed: metas.iter().all(|m| m.dom_closed),
                    zone: ZoneDescriptor { lower: metas.iter().flat_map(|m| m.zone.lower.clone()).collect() },
                }
            }
        }
    }
}

fn shift(x: &[f64], z0: &[f64]) -> Vec<f64> {
    x.iter().zip(z0).map(|(a, b)| a + b).collect()
}

fn combine_status(statuses: impl Iterator<Item = DomainStatus>) -> DomainStatus {
    let mut out = DomainStatus::Interior;
    for s in statuses {
        match s {
            DomainStatus::OutsideDomain => return DomainStatus::OutsideDomain,
            DomainStatus::BoundaryInDomain => out = DomainStatus::BoundaryInDomain,
            DomainStatus::Interior => {}
        }
    }
    out
}

fn split_blocks<'a>(blocks: &'a [EntropySpec], x: &'a [f64]) -> impl Iterator<Item = (&'a EntropySpec, &'a [f64])> {
    let mut off = 0;
    blocks.iter().map(move |b| {
        let xb = &x[off..off + b.dim];
        off += b.dim;
        (b, xb)
    })
}

#[cfg(test)]
mod tests;
