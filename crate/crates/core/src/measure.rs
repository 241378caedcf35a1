use crate::error::{OrfError, Result};
use crate::scalar::{Cx, Real};

/// Discrete inner product or bilinear form given by nodes and weights.
///
/// With only `weights_v` the induced form is the inner product with
/// `α_i = |v_i|²`; with `weights_w` present it is the bilinear form
/// `⟨r, s⟩ = Σ conj(w_i)·v_i·s(z_i)·r(z_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure<T> {
    pub nodes: Vec<Cx<T>>,
    pub weights_v: Vec<Cx<T>>,
    pub weights_w: Option<Vec<Cx<T>>>,
}

impl<T: Real> DiscreteMeasure<T> {
    /// Validated inner-product measure.
    pub fn inner_product(nodes: Vec<Cx<T>>, weights: Vec<Cx<T>>) -> Result<Self> {
        let m = Self { nodes, weights_v: weights, weights_w: None };
        m.validate()?;
        Ok(m)
    }

    /// Validated bilinear-form measure.
    pub fn bilinear(nodes: Vec<Cx<T>>, weights_v: Vec<Cx<T>>, weights_w: Vec<Cx<T>>) -> Result<Self> {
        let m = Self { nodes, weights_v, weights_w: Some(weights_w) };
        m.validate()?;
        Ok(m)
    }

    /// Unit weights on every node; `bilinear` selects whether `w` is present.
    pub fn unit_weights(nodes: Vec<Cx<T>>, bilinear: bool) -> Result<Self> {
        let ones = vec![Cx::new(T::one(), T::zero()); nodes.len()];
        if bilinear {
            Self::bilinear(nodes, ones.clone(), ones)
        } else {
            Self::inner_product(nodes, ones)
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_bilinear(&self) -> bool {
        self.weights_w.is_some()
    }

    /// Checks sizes, nonzero weights and pairwise distinct nodes.
    pub fn validate(&self) -> Result<()> {
        let m = self.nodes.len();
        if m == 0 {
            return Err(OrfError::InvalidInput("measure has no nodes".into()));
        }
        let mut lists = vec![&self.weights_v];
        if let Some(w) = &self.weights_w {
            lists.push(w);
        }
        for w in lists {
            if w.len() != m {
                return Err(OrfError::ShapeError { expected: format!("{m} weights"), found: format!("{}", w.len()) });
            }
            if let Some(i) = w.iter().position(|x| x.norm() == T::zero() || !x.norm().is_finite()) {
                return Err(OrfError::InvalidWeight(i));
            }
        }
        for (i, z) in self.nodes.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(OrfError::InvalidInput(format!("node {i} is not finite")));
            }
            if self.nodes[..i].iter().any(|y| is_duplicate(*y, *z)) {
                return Err(OrfError::DuplicateNode(i));
            }
        }
        Ok(())
    }

    /// The first `n` nodes and weights.
    pub fn prefix(&self, n: usize) -> Self {
        Self {
            nodes: self.nodes[..n].to_vec(),
            weights_v: self.weights_v[..n].to_vec(),
            weights_w: self.weights_w.as_ref().map(|w| w[..n].to_vec()),
        }
    }

    /// Converts nodes and weights to another real type.
    pub fn cast<U: Real>(&self) -> DiscreteMeasure<U> {
        let c = |v: &[Cx<T>]| v.iter().map(|&x| cast_complex(x)).collect::<Vec<_>>();
        DiscreteMeasure { nodes: c(&self.nodes), weights_v: c(&self.weights_v), weights_w: self.weights_w.as_deref().map(c) }
    }

    /// Appends one node with its weights, returning the enlarged measure.
    pub(crate) fn push(&mut self, z: Cx<T>, v: Cx<T>, w: Option<Cx<T>>) {
        self.nodes.push(z);
        self.weights_v.push(v);
        if let (Some(ws), Some(w)) = (self.weights_w.as_mut(), w) {
            ws.push(w);
        }
    }
}

pub(crate) fn cast_complex<T: Real, U: Real>(x: Cx<T>) -> Cx<U> {
    Cx::new(U::from(x.re).expect("castable"), U::from(x.im).expect("castable"))
}

/// Two nodes count as equal when they agree to within a few ulps.
pub(crate) fn is_duplicate<T: Real>(a: Cx<T>, b: Cx<T>) -> bool {
    let scale = a.norm().max(b.norm()).max(T::min_positive_value());
    (a - b).norm() <= T::lit(4.0) * T::unit_roundoff() * scale
}
