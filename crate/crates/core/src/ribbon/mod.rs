//! Metric ribbon graphs as pairs of permutations on half-edges.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numerics::{PrecisionContext, RealBall, SpherePoint};
use crate::qdiff::{residue_sqrt, QuadraticDifferential};
use crate::trajectory::{edge_period, EdgeMeasure, Separatrix, ZeroInfo};

/// `sigma` rotates half-edges counterclockwise around their vertex, `alpha`
/// swaps the two halves of each edge.
#[derive(Clone, Debug)]
pub struct RibbonGraph {
    sigma: Vec<usize>,
    alpha: Vec<usize>,
    edge_of: Vec<usize>,
    vertex_of: Vec<usize>,
    lengths: Vec<RealBall>,
    vertex_points: Vec<SpherePoint>,
}

#[derive(Clone, Debug)]
pub struct BoundaryCircuit {
    pub half_edges: Vec<usize>,
    pub length: RealBall,
}

fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut c = Vec::new();
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            c.push(h);
            h = perm[h];
        }
        out.push(c);
    }
    out
}

fn is_permutation(p: &[usize]) -> bool {
    let mut hit = vec![false; p.len()];
    p.iter().all(|&i| i < p.len() && !std::mem::replace(&mut hit[i], true))
}

impl RibbonGraph {
    /// Builds a graph from its permutations. Edges are numbered by their
    /// smallest half-edge, and `lengths` follows that numbering; vertices
    /// likewise follow the cycles of `sigma`.
    pub fn from_permutations(
        sigma: Vec<usize>,
        alpha: Vec<usize>,
        lengths: Vec<RealBall>,
        vertex_points: Vec<SpherePoint>,
    ) -> Result<RibbonGraph> {
        let n = sigma.len();
        if alpha.len() != n || !is_permutation(&sigma) || !is_permutation(&alpha) {
            return Err(Error::InconsistentTopology("sigma and alpha must be permutations of one set".into()));
        }
        if (0..n).any(|h| alpha[h] == h || alpha[alpha[h]] != h) {
            return Err(Error::InconsistentTopology("alpha is not a fixed-point-free involution".into()));
        }
        let mut edge_of = vec![usize::MAX; n];
        let mut e = 0;
        for h in 0..n {
            if edge_of[h] == usize::MAX {
                edge_of[h] = e;
                edge_of[alpha[h]] = e;
                e += 1;
            }
        }
        if lengths.len() != e {
            return Err(Error::Invalid(format!("{} lengths for {e} edges", lengths.len())));
        }
        if let Some(i) = lengths.iter().position(|l| !l.is_positive()) {
            return Err(Error::Invalid(format!("edge {i} length is not certified positive")));
        }
        let verts = cycles(&sigma);
        if let Some(v) = verts.iter().find(|c| c.len() < 3) {
            return Err(Error::InconsistentTopology(format!("vertex of valence {}", v.len())));
        }
        if vertex_points.len() != verts.len() && !vertex_points.is_empty() {
            return Err(Error::Invalid("one point per vertex expected".into()));
        }
        let mut vertex_of = vec![0; n];
        for (v, c) in verts.iter().enumerate() {
            for &h in c {
                vertex_of[h] = v;
            }
        }
        Ok(RibbonGraph {
            sigma,
            alpha,
            edge_of,
            vertex_of,
            lengths,
            vertex_points,
        })
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn n_half_edges(&self) -> usize {
        self.sigma.len()
    }

    pub fn n_edges(&self) -> usize {
        self.lengths.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_of.iter().max().map_or(0, |v| v + 1)
    }

    pub fn edge_of(&self, h: usize) -> usize {
        self.edge_of[h]
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    pub fn lengths(&self) -> &[RealBall] {
        &self.lengths
    }

    pub fn vertex_points(&self) -> &[SpherePoint] {
        &self.vertex_points
    }

    /// The two half-edges of every edge, smaller first.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut out = vec![[0, 0]; self.n_edges()];
        for h in (0..self.n_half_edges()).rev() {
            out[self.edge_of[h]] = [h, self.alpha[h]];
        }
        out
    }

    /// Valence to number of vertices.
    pub fn valence_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for c in cycles(&self.sigma) {
            *hist.entry(c.len()).or_insert(0) += 1;
        }
        hist
    }

    pub fn total_length(&self, ctx: PrecisionContext) -> RealBall {
        self.lengths.iter().fold(RealBall::zero(), |acc, l| acc.add(l, ctx))
    }

    /// Copy with one edge length replaced.
    pub fn with_length(&self, edge: usize, length: RealBall) -> RibbonGraph {
        let mut g = self.clone();
        g.lengths[edge] = length;
        g
    }

    fn is_connected(&self) -> bool {
        let nv = self.n_vertices();
        if nv == 0 {
            return true;
        }
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for h in 0..self.n_half_edges() {
                if self.vertex_of[h] == v {
                    let w = self.vertex_of[self.alpha[h]];
                    if !std::mem::replace(&mut seen[w], true) {
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Vertices are the zeros, `sigma` follows the increasing direction index
/// at each zero, and `alpha` pairs each separatrix with its reverse.
pub fn assemble_graph(separatrices: &[Separatrix], zeros: &[ZeroInfo]) -> Result<(RibbonGraph, Vec<EdgeMeasure>)> {
    let mut offset = Vec::with_capacity(zeros.len());
    let mut n = 0;
    for z in zeros {
        offset.push(n);
        n += z.order + 2;
    }
    let slot = |(v, j): (usize, usize)| -> Result<usize> {
        match zeros.get(v) {
            Some(z) if j < z.order + 2 => Ok(offset[v] + j),
            _ => Err(Error::UnmatchedHalfEdge(format!("no slot ({v}, {j})"))),
        }
    };
    let mut sigma = vec![0; n];
    for (v, z) in zeros.iter().enumerate() {
        let k = z.order + 2;
        for j in 0..k {
            sigma[offset[v] + j] = offset[v] + (j + 1) % k;
        }
    }
    let mut by_slot: Vec<Option<&Separatrix>> = vec![None; n];
    let mut alpha = vec![usize::MAX; n];
    for s in separatrices {
        let h = slot((s.origin, s.direction))?;
        if by_slot[h].replace(s).is_some() {
            return Err(Error::UnmatchedHalfEdge(format!("slot {:?} traced twice", (s.origin, s.direction))));
        }
        alpha[h] = slot(s.terminal)?;
    }
    if let Some(h) = (0..n).find(|&h| by_slot[h].is_none()) {
        return Err(Error::UnmatchedHalfEdge(format!("half-edge {h} has no separatrix")));
    }
    if let Some(h) = (0..n).find(|&h| alpha[alpha[h]] != h || alpha[h] == h) {
        return Err(Error::UnmatchedHalfEdge(format!(
            "half-edge {h} ends at {} whose separatrix does not return",
            alpha[h]
        )));
    }
    let mut measures = Vec::new();
    for h in 0..n {
        if h < alpha[h] {
            let m = edge_period(by_slot[h].expect("checked"), by_slot[alpha[h]].expect("checked"))
                .map_err(|e| match e {
                    Error::Mismatch(m) => Error::LengthMismatch(m),
                    other => other,
                })?;
            measures.push(m);
        }
    }
    let lengths = measures.iter().map(|m| m.period.clone()).collect();
    let points = zeros.iter().map(|z| SpherePoint::Finite(z.point.clone())).collect();
    Ok((RibbonGraph::from_permutations(sigma, alpha, lengths, points)?, measures))
}

/// Orbits of `sigma . alpha` with their lengths.
pub fn boundary_circuits(g: &RibbonGraph, ctx: PrecisionContext) -> Vec<BoundaryCircuit> {
    let phi: Vec<usize> = (0..g.n_half_edges()).map(|h| g.sigma[g.alpha[h]]).collect();
    cycles(&phi)
        .into_iter()
        .map(|c| {
            let length = c
                .iter()
                .fold(RealBall::zero(), |acc, &h| acc.add(&g.lengths[g.edge_of[h]], ctx));
            BoundaryCircuit { half_edges: c, length }
        })
        .collect()
}

/// `(genus, boundary count)` from `v - e + n = 2 - 2g`.
pub fn euler_genus(g: &RibbonGraph) -> Result<(usize, usize)> {
    if !g.is_connected() {
        return Err(Error::InconsistentTopology("graph is not connected".into()));
    }
    let v = g.n_vertices() as i64;
    let e = g.n_edges() as i64;
    let phi: Vec<usize> = (0..g.n_half_edges()).map(|h| g.sigma[g.alpha[h]]).collect();
    let n = cycles(&phi).len() as i64;
    let twice = 2 - n - v + e;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::InconsistentTopology(format!(
            "v = {v}, e = {e}, n = {n} give no integral genus"
        )));
    }
    Ok(((twice / 2) as usize, n as usize))
}

#[derive(Clone, Debug)]
pub struct ResidueValidation {
    /// `(circuit index, residue index, |difference|)`.
    pub pairs: Vec<(usize, usize, f64)>,
    pub worst: f64,
    pub pass: bool,
    /// Two residues lie within `tol` of each other, so only the multiset
    /// comparison is meaningful.
    pub ambiguous: bool,
}

/// Pairs boundary lengths with residues by sorted order (the matching that
/// minimises the worst difference).
pub fn match_lengths(circuits: &[RealBall], residues: &[RealBall], tol: f64) -> ResidueValidation {
    let mut ci: Vec<usize> = (0..circuits.len()).collect();
    let mut ri: Vec<usize> = (0..residues.len()).collect();
    let key = |b: &RealBall| b.mid_f64();
    ci.sort_by(|&a, &b| key(&circuits[a]).total_cmp(&key(&circuits[b])));
    ri.sort_by(|&a, &b| key(&residues[a]).total_cmp(&key(&residues[b])));
    let pairs: Vec<(usize, usize, f64)> = ci
        .iter()
        .zip(&ri)
        .map(|(&c, &r)| {
            let d = (key(&circuits[c]) - key(&residues[r])).abs()
                + circuits[c].rad_f64()
                + residues[r].rad_f64();
            (c, r, d)
        })
        .collect();
    let worst = if circuits.len() == residues.len() {
        pairs.iter().map(|p| p.2).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let ambiguous = ri.windows(2).any(|w| (key(&residues[w[1]]) - key(&residues[w[0]])).abs() <= tol);
    ResidueValidation {
        pairs,
        worst,
        pass: worst <= tol,
        ambiguous,
    }
}

/// Compares boundary-circuit lengths with the residues of `sqrt(q)` at its
/// poles.
pub fn validate_against_residues(
    g: &RibbonGraph,
    q: &QuadraticDifferential,
    tol: f64,
    ctx: PrecisionContext,
) -> Result<ResidueValidation> {
    let d = crate::qdiff::divisor(q, ctx)?;
    let residues = d
        .poles()
        .map(|p| residue_sqrt(q, &p.point, ctx))
        .collect::<Result<Vec<_>>>()?;
    let lengths: Vec<RealBall> = boundary_circuits(g, ctx).into_iter().map(|c| c.length).collect();
    Ok(match_lengths(&lengths, &residues, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> RealBall {
        RealBall::one()
    }

    fn torus() -> RibbonGraph {
        // one vertex, half-edges a b a' b' in rotation order
        RibbonGraph::from_permutations(vec![1, 2, 3, 0], vec![2, 3, 0, 1], vec![unit(), unit()], vec![]).unwrap()
    }

    fn theta() -> RibbonGraph {
        // vertices {0,1,2} and {3,4,5}; edge i joins i and 5 - i
        RibbonGraph::from_permutations(
            vec![1, 2, 0, 4, 5, 3],
            vec![5, 4, 3, 2, 1, 0],
            vec![unit(), unit(), unit()],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn torus_graph() {
        let g = torus();
        assert_eq!(euler_genus(&g).unwrap(), (1, 1));
        let c = boundary_circuits(&g, PrecisionContext::default());
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].half_edges.len(), 4);
    }

    #[test]
    fn theta_graph() {
        let g = theta();
        let ctx = PrecisionContext::default();
        assert_eq!(euler_genus(&g).unwrap(), (0, 3));
        let c = boundary_circuits(&g, ctx);
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|c| c.length.contains_rational(&crate::numerics::rational(2, 1))));
        assert_eq!(g.valence_histogram(), BTreeMap::from([(3, 2)]));
    }

    #[test]
    fn invalid_permutations_are_rejected() {
        assert!(RibbonGraph::from_permutations(vec![0, 1], vec![1, 0], vec![unit()], vec![]).is_err());
        assert!(RibbonGraph::from_permutations(vec![1, 2, 0], vec![0, 2, 1], vec![unit()], vec![]).is_err());
    }

    #[test]
    fn perturbed_length_fails_matching() {
        let ctx = PrecisionContext::default();
        let g = theta().with_length(0, RealBall::from_f64(1.001));
        let lengths: Vec<RealBall> = boundary_circuits(&g, ctx).into_iter().map(|c| c.length).collect();
        let res = vec![RealBall::from_i64(2); 3];
        let v = match_lengths(&lengths, &res, 1e-10);
        assert!(!v.pass);
        assert!((v.worst - 1e-3).abs() < 1e-9);
        assert!(v.ambiguous);
    }
}
