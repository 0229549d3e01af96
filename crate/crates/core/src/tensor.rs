//! Dense tensors in End(V^(x)k) with jet-valued entries.
//!
//! Entry addressing is big-endian in the tensor factors: factor 0 is
//! the most significant digit of both the row (ket) and column (bra)
//! word. Dense storage is deliberate: at desk scale the largest side is
//! a few hundred, and R-matrix products destroy sparsity anyway.

use crate::error::Error;
use crate::jet::JetScalar;
use crate::perm::Perm;
use crate::space::GradedSpace;
use crate::Result;
use serde_json::json;
use std::collections::BTreeMap;

#[derive(Clone)]
pub struct Tensor {
    space: GradedSpace,
    arity: usize,
    side: usize,
    order: usize,
    entries: Vec<JetScalar>,
}

fn pow_usize(b: usize, e: usize) -> usize {
    let mut acc = 1usize;
    for _ in 0..e {
        acc *= b;
    }
    acc
}

impl Tensor {
    pub fn zeros(space: GradedSpace, arity: usize, order: usize) -> Self {
        let side = pow_usize(space.dim(), arity);
        Tensor { space, arity, side, order, entries: vec![JetScalar::zero(order); side * side] }
    }

    pub fn identity(space: GradedSpace, arity: usize, order: usize) -> Self {
        let mut t = Self::zeros(space, arity, order);
        for r in 0..t.side {
            t.entries[r * t.side + r] = JetScalar::one(order);
        }
        t
    }

    /// E_{ij} as an arity-1 tensor (0-based labels).
    pub fn matrix_unit(space: GradedSpace, i: usize, j: usize, order: usize) -> Result<Self> {
        space.check_label(i)?;
        space.check_label(j)?;
        let mut t = Self::zeros(space, 1, order);
        let side = t.side;
        t.entries[i * side + j] = JetScalar::one(order);
        Ok(t)
    }

    /// Diagonal arity-1 tensor from the given entries.
    pub fn diagonal(space: GradedSpace, diag: &[JetScalar]) -> Result<Self> {
        if diag.len() != space.dim() {
            return Err(Error::SpaceMismatch);
        }
        let order = diag.first().map_or(6, |j| j.order());
        let mut t = Self::zeros(space, 1, order);
        for (i, v) in diag.iter().enumerate() {
            t.entries[i * t.space.dim() + i] = v.clone();
        }
        Ok(t)
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn get(&self, row: usize, col: usize) -> &JetScalar {
        &self.entries[row * self.side + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: JetScalar) {
        self.entries[row * self.side + col] = v;
    }

    /// Decomposes a flat index into the factor word, factor 0 first.
    pub fn unrank(&self, mut idx: usize) -> Vec<usize> {
        let d = self.dim();
        let mut w = vec![0usize; self.arity];
        for a in (0..self.arity).rev() {
            w[a] = idx % d;
            idx /= d;
        }
        w
    }

    pub fn rank(&self, word: &[usize]) -> usize {
        let d = self.dim();
        word.iter().fold(0, |acc, &w| acc * d + w)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.space != other.space || self.arity != other.arity {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(other.entries.iter()) {
            *a = a.add(b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(other.entries.iter()) {
            *a = a.sub(b);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &JetScalar) -> Self {
        let mut out = self.clone();
        for a in &mut out.entries {
            *a = a.mul(s);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for a in &mut out.entries {
            *a = a.neg();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let side = self.side;
        let mut out = Self::zeros(self.space.clone(), self.arity, self.order);
        for r in 0..side {
            for k in 0..side {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..side {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(r, c).add(&a.mul(b));
                    out.set(r, c, cur);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; arities add, big-endian index concatenation.
    /// No sign rules: the grading enters only through R-matrix entries.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let arity = self.arity + other.arity;
        let mut out = Self::zeros(self.space.clone(), arity, self.order);
        let (sa, sb) = (self.side, other.side);
        for ra in 0..sa {
            for ca in 0..sa {
                let x = self.get(ra, ca);
                if x.is_zero() {
                    continue;
                }
                for rb in 0..sb {
                    for cb in 0..sb {
                        let y = other.get(rb, cb);
                        if y.is_zero() {
                            continue;
                        }
                        out.set(ra * sb + rb, ca * sb + cb, x.mul(y));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Trace over the given factor positions (0-based); remaining
    /// factors keep their relative order.
    pub fn partial_trace(&self, positions: &[usize]) -> Result<Self> {
        for &p in positions {
            if p >= self.arity {
                return Err(Error::PositionOutOfRange { pos: p, arity: self.arity });
            }
        }
        let d = self.dim();
        let keep: Vec<usize> = (0..self.arity).filter(|p| !positions.contains(p)).collect();
        let mut out = Self::zeros(self.space.clone(), keep.len(), self.order);
        let traced: Vec<usize> = positions.to_vec();
        let t_count = pow_usize(d, traced.len());
        for r_out in 0..out.side {
            let rw_keep = out.unrank(r_out);
            for c_out in 0..out.side {
                let cw_keep = out.unrank(c_out);
                let mut acc = JetScalar::zero(self.order);
                for t in 0..t_count {
                    // build full words with the traced labels equal on both sides
                    let mut tw = vec![0usize; traced.len()];
                    let mut tt = t;
                    for a in (0..traced.len()).rev() {
                        tw[a] = tt % d;
                        tt /= d;
                    }
                    let mut rw = vec![0usize; self.arity];
                    let mut cw = vec![0usize; self.arity];
                    for (k, &p) in keep.iter().enumerate() {
                        rw[p] = rw_keep[k];
                        cw[p] = cw_keep[k];
                    }
                    for (k, &p) in traced.iter().enumerate() {
                        rw[p] = tw[k];
                        cw[p] = tw[k];
                    }
                    acc = acc.add(self.get(self.rank(&rw), self.rank(&cw)));
                }
                out.set(r_out, c_out, acc);
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> JetScalar {
        let mut acc = JetScalar::zero(self.order);
        for r in 0..self.side {
            acc = acc.add(self.get(r, r));
        }
        acc
    }

    /// Conjugation by the basis permutation of the factors:
    /// entry (R, C) of the result reads entry (R o sigma, C o sigma).
    pub fn permute_factors(&self, sigma: &Perm) -> Result<Self> {
        if sigma.len() != self.arity {
            return Err(Error::BadPermutation { arity: self.arity });
        }
        let mut out = Self::zeros(self.space.clone(), self.arity, self.order);
        for r in 0..self.side {
            let rw = self.unrank(r);
            let rp: Vec<usize> = (0..self.arity).map(|a| rw[sigma.apply(a)]).collect();
            for c in 0..self.side {
                let e = self.get(r, c);
                if e.is_zero() {
                    continue;
                }
                let cw = self.unrank(c);
                let cp: Vec<usize> = (0..self.arity).map(|a| cw[sigma.apply(a)]).collect();
                out.set(self.rank(&rp), self.rank(&cp), e.clone());
            }
        }
        Ok(out)
    }

    /// Places an operator into the named slots of a larger tensor
    /// product, identity elsewhere. Slots are distinct, 0-based, and
    /// keep the operator's factor order.
    pub fn place_in_slots(&self, slots: &[usize], total: usize) -> Result<Self> {
        if slots.len() != self.arity {
            return Err(Error::BadPermutation { arity: self.arity });
        }
        for &s in slots {
            if s >= total {
                return Err(Error::SlotOutOfRange { slot: s, total });
            }
        }
        let mut out = Tensor::zeros(self.space.clone(), total, self.order);
        let d = self.dim();
        let rest: Vec<usize> = (0..total).filter(|p| !slots.contains(p)).collect();
        let rest_count = pow_usize(d, rest.len());
        for rs in 0..self.side {
            let rw_s = self.unrank(rs);
            for cs in 0..self.side {
                let e = self.get(rs, cs);
                if e.is_zero() {
                    continue;
                }
                let cw_s = self.unrank(cs);
                for t in 0..rest_count {
                    let mut tw = vec![0usize; rest.len()];
                    let mut tt = t;
                    for a in (0..rest.len()).rev() {
                        tw[a] = tt % d;
                        tt /= d;
                    }
                    let mut rw = vec![0usize; total];
                    let mut cw = vec![0usize; total];
                    for (k, &p) in slots.iter().enumerate() {
                        rw[p] = rw_s[k];
                        cw[p] = cw_s[k];
                    }
                    for (k, &p) in rest.iter().enumerate() {
                        rw[p] = tw[k];
                        cw[p] = tw[k];
                    }
                    out.set(out.rank(&rw), out.rank(&cw), e.clone());
                }
            }
        }
        Ok(out)
    }

    /// Left-multiplies by an operator supported on the named slots:
    /// result = place(op, slots) . self, contracted without
    /// materializing the placement.
    pub fn apply_small_left(&self, op: &Tensor, slots: &[usize]) -> Result<Self> {
        if op.space != self.space {
            return Err(Error::SpaceMismatch);
        }
        if slots.len() != op.arity {
            return Err(Error::BadPermutation { arity: op.arity });
        }
        for &s in slots {
            if s >= self.arity {
                return Err(Error::SlotOutOfRange { slot: s, total: self.arity });
            }
        }
        let mut out = Self::zeros(self.space.clone(), self.arity, self.order);
        for r in 0..self.side {
            let rw = self.unrank(r);
            let op_row: Vec<usize> = slots.iter().map(|&s| rw[s]).collect();
            let op_r = op.rank(&op_row);
            for k in 0..op.side {
                let oe = op.get(op_r, k);
                if oe.is_zero() {
                    continue;
                }
                let kw = op.unrank(k);
                let mut mid = rw.clone();
                for (a, &s) in slots.iter().enumerate() {
                    mid[s] = kw[a];
                }
                let mid_r = self.rank(&mid);
                for c in 0..self.side {
                    let xe = self.get(mid_r, c);
                    if xe.is_zero() {
                        continue;
                    }
                    let cur = out.get(r, c).add(&oe.mul(xe));
                    out.set(r, c, cur);
                }
            }
        }
        Ok(out)
    }

    /// result = self . place(op, slots).
    pub fn apply_small_right(&self, op: &Tensor, slots: &[usize]) -> Result<Self> {
        if op.space != self.space {
            return Err(Error::SpaceMismatch);
        }
        if slots.len() != op.arity {
            return Err(Error::BadPermutation { arity: op.arity });
        }
        let mut out = Self::zeros(self.space.clone(), self.arity, self.order);
        for c in 0..self.side {
            let cw = self.unrank(c);
            let op_col: Vec<usize> = slots.iter().map(|&s| cw[s]).collect();
            let op_c = op.rank(&op_col);
            for k in 0..op.side {
                let oe = op.get(k, op_c);
                if oe.is_zero() {
                    continue;
                }
                let kw = op.unrank(k);
                let mut mid = cw.clone();
                for (a, &s) in slots.iter().enumerate() {
                    mid[s] = kw[a];
                }
                let mid_c = self.rank(&mid);
                for r in 0..self.side {
                    let xe = self.get(r, mid_c);
                    if xe.is_zero() {
                        continue;
                    }
                    let cur = out.get(r, c).add(&xe.mul(oe));
                    out.set(r, c, cur);
                }
            }
        }
        Ok(out)
    }

    /// Zero-padded coordinate inclusion applied in every factor:
    /// `map[i]` is the target label of source label i.
    pub fn embed_labels(&self, target: GradedSpace, map: &[usize]) -> Result<Self> {
        if map.len() != self.dim() {
            return Err(Error::GradingMismatch);
        }
        for (i, &j) in map.iter().enumerate() {
            if j >= target.dim() || target.eps(j) != self.space.eps(i) {
                return Err(Error::GradingMismatch);
            }
        }
        let mut out = Tensor::zeros(target, self.arity, self.order);
        for r in 0..self.side {
            let rw = self.unrank(r);
            let rt: Vec<usize> = rw.iter().map(|&w| map[w]).collect();
            for c in 0..self.side {
                let e = self.get(r, c);
                if e.is_zero() {
                    continue;
                }
                let cw = self.unrank(c);
                let ct: Vec<usize> = cw.iter().map(|&w| map[w]).collect();
                out.set(out.rank(&rt), out.rank(&ct), e.clone());
            }
        }
        Ok(out)
    }

    /// Coordinate restriction applied in every factor: reads the block
    /// of entries whose labels lie in the image of `map`.
    pub fn restrict_labels(&self, target: GradedSpace, map: &[usize]) -> Result<Self> {
        if map.len() != target.dim() {
            return Err(Error::GradingMismatch);
        }
        for (i, &j) in map.iter().enumerate() {
            if j >= self.dim() || self.space.eps(j) != target.eps(i) {
                return Err(Error::GradingMismatch);
            }
        }
        let mut out = Tensor::zeros(target, self.arity, self.order);
        for r in 0..out.side {
            let rw = out.unrank(r);
            let rs: Vec<usize> = rw.iter().map(|&w| map[w]).collect();
            for c in 0..out.side {
                let cw = out.unrank(c);
                let cs: Vec<usize> = cw.iter().map(|&w| map[w]).collect();
                out.set(r, c, self.get(self.rank(&rs), self.rank(&cs)).clone());
            }
        }
        Ok(out)
    }

    /// Partial trace with the traced diagonal labels restricted to a
    /// sublist (used to confirm which block feeds a projected trace).
    pub fn partial_trace_restricted(&self, positions: &[usize], allowed: &[usize]) -> Result<Self> {
        for &p in positions {
            if p >= self.arity {
                return Err(Error::PositionOutOfRange { pos: p, arity: self.arity });
            }
        }
        let keep: Vec<usize> = (0..self.arity).filter(|p| !positions.contains(p)).collect();
        let mut out = Self::zeros(self.space.clone(), keep.len(), self.order);
        let mut diag_words = vec![vec![]];
        for _ in 0..positions.len() {
            let mut next = Vec::new();
            for w in &diag_words {
                for &a in allowed {
                    let mut w2: Vec<usize> = w.clone();
                    w2.push(a);
                    next.push(w2);
                }
            }
            diag_words = next;
        }
        for r_out in 0..out.side {
            let rw_keep = out.unrank(r_out);
            for c_out in 0..out.side {
                let cw_keep = out.unrank(c_out);
                let mut acc = JetScalar::zero(self.order);
                for tw in &diag_words {
                    let mut rw = vec![0usize; self.arity];
                    let mut cw = vec![0usize; self.arity];
                    for (k, &p) in keep.iter().enumerate() {
                        rw[p] = rw_keep[k];
                        cw[p] = cw_keep[k];
                    }
                    for (k, &p) in positions.iter().enumerate() {
                        rw[p] = tw[k];
                        cw[p] = tw[k];
                    }
                    acc = acc.add(self.get(self.rank(&rw), self.rank(&cw)));
                }
                out.set(r_out, c_out, acc);
            }
        }
        Ok(out)
    }

    /// Transposition in a single factor (entry reindexing).
    pub fn transpose_factor(&self, pos: usize) -> Result<Self> {
        if pos >= self.arity {
            return Err(Error::PositionOutOfRange { pos, arity: self.arity });
        }
        let mut out = Self::zeros(self.space.clone(), self.arity, self.order);
        for r in 0..self.side {
            let rw = self.unrank(r);
            for c in 0..self.side {
                let e = self.get(r, c);
                if e.is_zero() {
                    continue;
                }
                let cw = self.unrank(c);
                let mut rw2 = rw.clone();
                let mut cw2 = cw.clone();
                rw2[pos] = cw[pos];
                cw2[pos] = rw[pos];
                out.set(self.rank(&rw2), self.rank(&cw2), e.clone());
            }
        }
        Ok(out)
    }

    /// Extracts the block supported on `slots`, asserting the tensor is
    /// `block (x) identity` on the complementary slots. Errors with
    /// `WheelViolation` otherwise.
    pub fn extract_block(&self, slots: &[usize]) -> Result<Self> {
        let d = self.dim();
        let rest: Vec<usize> = (0..self.arity).filter(|p| !slots.contains(p)).collect();
        let sub_side = pow_usize(d, slots.len());
        let mut block = Tensor::zeros(self.space.clone(), slots.len(), self.order);
        // read the candidate block at rest-labels all zero
        for rs in 0..sub_side {
            let rw_s = block.unrank(rs);
            for cs in 0..sub_side {
                let cw_s = block.unrank(cs);
                let mut rw = vec![0usize; self.arity];
                let mut cw = vec![0usize; self.arity];
                for (k, &p) in slots.iter().enumerate() {
                    rw[p] = rw_s[k];
                    cw[p] = cw_s[k];
                }
                block.set(rs, cs, self.get(self.rank(&rw), self.rank(&cw)).clone());
            }
        }
        let rebuilt = block.place_in_slots(slots, self.arity)?;
        if !(rebuilt == *self) {
            return Err(Error::WheelViolation(format!(
                "tensor is not of block x identity form on slots {:?} (rest {:?})",
                slots, rest
            )));
        }
        Ok(block)
    }

    /// JSON dump in the shared tensor schema. `point` carries symbol
    /// bindings; jets are encoded as "jet:val:c0,c1,...".
    pub fn to_json(&self, point: &BTreeMap<String, JetScalar>) -> serde_json::Value {
        let mut entries = Vec::new();
        for r in 0..self.side {
            for c in 0..self.side {
                let e = self.get(r, c);
                if !e.is_zero() {
                    entries.push(json!([r, c, encode_jet(e)]));
                }
            }
        }
        let point_map: BTreeMap<String, String> =
            point.iter().map(|(k, v)| (k.clone(), encode_jet(v))).collect();
        json!({
            "space": {"n": self.space.bosonic(), "m": self.space.fermionic()},
            "arity": self.arity,
            "point": point_map,
            "entries": entries,
        })
    }
}

/// Plain values encode as bare decimal strings, genuine jets as
/// "jet:<valuation>:<c0>,<c1>,...".
pub fn encode_jet(j: &JetScalar) -> String {
    if let Some(c) = j.as_plain() {
        return c.to_decimal_string();
    }
    let val = j.valuation().unwrap_or(0);
    let mut coeffs = Vec::new();
    let mut e = val;
    while let Ok(c) = j.coefficient_at(e) {
        coeffs.push(c.to_decimal_string());
        e += 1;
    }
    format!("jet:{}:{}", val, coeffs.join(","))
}

impl PartialEq for Tensor {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space
            && self.arity == other.arity
            && self.entries.iter().zip(other.entries.iter()).all(|(a, b)| a == b)
    }
}

impl std::fmt::Debug for Tensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Tensor(dim {}, arity {})", self.dim(), self.arity)?;
        for r in 0..self.side {
            for c in 0..self.side {
                let e = self.get(r, c);
                if !e.is_zero() {
                    writeln!(f, "  [{:?} ; {:?}] = {:?}", self.unrank(r), self.unrank(c), e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Coefficient;

    const K: usize = 6;

    fn space2() -> GradedSpace {
        GradedSpace::standard(2, 0)
    }

    #[test]
    fn matrix_unit_products() {
        let s = space2();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let a = Tensor::matrix_unit(s.clone(), i, j, K).unwrap();
                        let b = Tensor::matrix_unit(s.clone(), k, l, K).unwrap();
                        let prod = a.matmul(&b).unwrap();
                        let expect = if j == k {
                            Tensor::matrix_unit(s.clone(), i, l, K).unwrap()
                        } else {
                            Tensor::zeros(s.clone(), 1, K)
                        };
                        assert_eq!(prod, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn matrix_unit_out_of_range() {
        let s = space2();
        assert!(matches!(
            Tensor::matrix_unit(s, 2, 0, K),
            Err(Error::LabelOutOfRange { .. })
        ));
    }

    #[test]
    fn kron_identity_and_unit_entry() {
        let s = space2();
        let id1 = Tensor::identity(s.clone(), 1, K);
        let id2 = id1.kron(&id1).unwrap();
        assert_eq!(id2, Tensor::identity(s.clone(), 2, K));

        let e11 = Tensor::matrix_unit(s.clone(), 0, 0, K).unwrap();
        let e22 = Tensor::matrix_unit(s.clone(), 1, 1, K).unwrap();
        let k = e11.kron(&e22).unwrap();
        // single unit entry at word (0,1),(0,1)
        let idx = k.rank(&[0, 1]);
        assert_eq!(k.get(idx, idx), &JetScalar::one(K));
        let total: usize = (0..k.side())
            .flat_map(|r| (0..k.side()).map(move |c| (r, c)))
            .filter(|&(r, c)| !k.get(r, c).is_zero())
            .count();
        assert_eq!(total, 1);
    }

    #[test]
    fn partial_trace_of_identity_and_kron() {
        let s = space2();
        let id1 = Tensor::identity(s.clone(), 1, K);
        let tr = id1.partial_trace(&[0]).unwrap();
        assert_eq!(tr.arity(), 0);
        assert_eq!(tr.get(0, 0).as_plain().unwrap(), Coefficient::from_int(2));

        // trace of kron(A, B) over B's slots = A * tr(B)
        let a = Tensor::matrix_unit(s.clone(), 0, 1, K).unwrap();
        let mut b = Tensor::zeros(s.clone(), 1, K);
        b.set(0, 0, JetScalar::from_int(3, K));
        b.set(1, 1, JetScalar::from_int(4, K));
        b.set(0, 1, JetScalar::from_int(9, K));
        let ab = a.kron(&b).unwrap();
        let traced = ab.partial_trace(&[1]).unwrap();
        assert_eq!(traced, a.scale(&JetScalar::from_int(7, K)));
    }

    #[test]
    fn permute_round_trip_and_swap() {
        let s = space2();
        let e12 = Tensor::matrix_unit(s.clone(), 0, 1, K).unwrap();
        let e21 = Tensor::matrix_unit(s.clone(), 1, 0, K).unwrap();
        let x = e12.kron(&e21).unwrap();
        let swap = Perm::adjacent(2, 0);
        let y = x.permute_factors(&swap).unwrap();
        assert_eq!(y, e21.kron(&e12).unwrap());
        let back = y.permute_factors(&swap.inverse()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn conjugation_by_the_swap_operator_permutes_factors() {
        let s = space2();
        let mut p = Tensor::zeros(s.clone(), 2, K);
        for a in 0..2 {
            for b in 0..2 {
                p.set(a * 2 + b, b * 2 + a, JetScalar::one(K));
            }
        }
        let e12 = Tensor::matrix_unit(s.clone(), 0, 1, K).unwrap();
        let e21 = Tensor::matrix_unit(s.clone(), 1, 0, K).unwrap();
        let x = e12.kron(&e21).unwrap();
        let conj = p.matmul(&x).unwrap().matmul(&p).unwrap();
        assert_eq!(conj, x.permute_factors(&Perm::adjacent(2, 0)).unwrap());
    }

    #[test]
    fn embedding_round_trips_through_projection() {
        let small = GradedSpace::standard(1, 1);
        let big = GradedSpace::with_grading(vec![1, 1, -1]).unwrap();
        let map = vec![0usize, 2];
        let mut x = Tensor::zeros(small.clone(), 2, K);
        for r in 0..x.side() {
            for c in 0..x.side() {
                x.set(r, c, JetScalar::from_int((r * 5 + c) as i64 + 1, K));
            }
        }
        let embedded = x.embed_labels(big, &map).unwrap();
        let back = embedded.restrict_labels(small, &map).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn place_and_apply_agree() {
        let s = space2();
        let e12 = Tensor::matrix_unit(s.clone(), 0, 1, K).unwrap();
        let e21 = Tensor::matrix_unit(s.clone(), 1, 0, K).unwrap();
        let op = e12.kron(&e21).unwrap();
        let mut x = Tensor::identity(s.clone(), 3, K);
        x.set(1, 6, JetScalar::from_int(5, K));
        let placed = op.place_in_slots(&[2, 0], 3).unwrap();
        let via_mat = placed.matmul(&x).unwrap();
        let via_apply = x.apply_small_left(&op, &[2, 0]).unwrap();
        assert_eq!(via_mat, via_apply);
        let via_mat_r = x.matmul(&placed).unwrap();
        let via_apply_r = x.apply_small_right(&op, &[2, 0]).unwrap();
        assert_eq!(via_mat_r, via_apply_r);
    }

    #[test]
    fn partial_trace_cyclic_in_traced_slots() {
        // Tr_S[(id (x) M) X (id (x) M^-1)] = Tr_S[X] for M supported on S
        let s = space2();
        let mut x = Tensor::zeros(s.clone(), 3, K);
        let mut m = Tensor::zeros(s.clone(), 1, K);
        for r in 0..x.side() {
            for c in 0..x.side() {
                x.set(r, c, JetScalar::from_int(((r * 31 + c * 7) % 13) as i64 + 1, K));
            }
        }
        m.set(0, 0, JetScalar::from_int(3, K));
        m.set(0, 1, JetScalar::from_int(5, K));
        m.set(1, 1, JetScalar::from_int(2, K));
        let m_inv = {
            // inverse of the upper triangular 2x2
            let mut inv = Tensor::zeros(s.clone(), 1, K);
            let a = m.get(0, 0).inv().unwrap();
            let d = m.get(1, 1).inv().unwrap();
            inv.set(0, 0, a.clone());
            inv.set(1, 1, d.clone());
            inv.set(0, 1, m.get(0, 1).neg().mul(&a).mul(&d));
            inv
        };
        let conj = x
            .apply_small_left(&m, &[2])
            .unwrap()
            .apply_small_right(&m_inv, &[2])
            .unwrap();
        let lhs = conj.partial_trace(&[2]).unwrap();
        let rhs = x.partial_trace(&[2]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn kron_is_associative() {
        let s = space2();
        let a = Tensor::matrix_unit(s.clone(), 0, 1, K).unwrap();
        let b = Tensor::matrix_unit(s.clone(), 1, 0, K).unwrap();
        let c = Tensor::matrix_unit(s.clone(), 1, 1, K).unwrap();
        let left = a.kron(&b).unwrap().kron(&c).unwrap();
        let right = a.kron(&b.kron(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn extract_block_detects_structure() {
        let s = space2();
        let mut blk = Tensor::zeros(s.clone(), 1, K);
        blk.set(0, 1, JetScalar::from_int(7, K));
        blk.set(1, 1, JetScalar::from_int(2, K));
        let placed = blk.place_in_slots(&[1], 3).unwrap();
        let got = placed.extract_block(&[1]).unwrap();
        assert_eq!(got, blk);
        // a non-factorized tensor is rejected
        let mut bad = placed.clone();
        bad.set(0, 0, JetScalar::from_int(1, K));
        assert!(matches!(bad.extract_block(&[1]), Err(Error::WheelViolation(_))));
    }
}
