//! Abstract 2-dimensional cell complexes: vertices, oriented edges, and faces
//! attached along boundary circles, plus gluing (quotients), sums, products,
//! and the builtin cellulations used throughout.

use std::collections::HashMap;
use std::fmt;

use crate::matrix::ModMatrix;

/// Orientation of a cell reference; acts as the order-two group {+1, -1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn combine(self, other: Sign) -> Sign {
        if self == other { Sign::Plus } else { Sign::Minus }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A cell together with an orientation: +cell or -cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrientedCellRef {
    pub sign: Sign,
    pub cell: String,
}

impl OrientedCellRef {
    pub fn plus(cell: impl Into<String>) -> Self {
        OrientedCellRef { sign: Sign::Plus, cell: cell.into() }
    }

    pub fn minus(cell: impl Into<String>) -> Self {
        OrientedCellRef { sign: Sign::Minus, cell: cell.into() }
    }

    pub fn negated(&self) -> Self {
        OrientedCellRef { sign: self.sign.flip(), cell: self.cell.clone() }
    }
}

impl fmt::Display for OrientedCellRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Plus => write!(f, "{}", self.cell),
            Sign::Minus => write!(f, "-{}", self.cell),
        }
    }
}

/// The attaching circle of a face: a cyclic sequence of oriented edges.
/// Equality holds up to cyclic rotation; negation reverses the traversal
/// order and flips every sign.
#[derive(Debug, Clone, Eq)]
pub struct BoundaryCircle {
    pub refs: Vec<OrientedCellRef>,
}

impl BoundaryCircle {
    pub fn new(refs: Vec<OrientedCellRef>) -> Self {
        BoundaryCircle { refs }
    }

    pub fn len(&self) -> usize {
        self.refs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.refs.is_empty()
    }

    pub fn negated(&self) -> BoundaryCircle {
        BoundaryCircle { refs: self.refs.iter().rev().map(OrientedCellRef::negated).collect() }
    }

    fn rotated(&self, k: usize) -> Vec<OrientedCellRef> {
        let n = self.refs.len();
        (0..n).map(|i| self.refs[(i + k) % n].clone()).collect()
    }

    pub fn eq_up_to_rotation(&self, other: &BoundaryCircle) -> bool {
        if self.refs.len() != other.refs.len() {
            return false;
        }
        if self.refs.is_empty() {
            return true;
        }
        (0..self.refs.len()).any(|k| self.rotated(k) == other.refs)
    }
}

impl PartialEq for BoundaryCircle {
    fn eq(&self, other: &Self) -> bool {
        self.eq_up_to_rotation(other)
    }
}

impl fmt::Display for BoundaryCircle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.refs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", r)?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub name: String,
    pub boundary: BoundaryCircle,
}

/// An abstract 2-dimensional cell complex: finite families of named cells
/// with attaching maps. Cell order is significant; it fixes the chain bases.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CellComplex {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
}

/// Identifications to quotient by: unordered pairs per dimension, oriented
/// for edges and faces.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GluingSpec {
    pub vertex_pairs: Vec<(String, String)>,
    pub edge_pairs: Vec<(OrientedCellRef, OrientedCellRef)>,
    pub face_pairs: Vec<(OrientedCellRef, OrientedCellRef)>,
}

impl GluingSpec {
    pub fn is_empty(&self) -> bool {
        self.vertex_pairs.is_empty() && self.edge_pairs.is_empty() && self.face_pairs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellError {
    /// validate() diagnostics, naming the first violated cell.
    Invalid { cell: String, problem: String },
    /// Incoherent gluing, naming the offending pair.
    IncoherentGluing { detail: String },
    /// A gluing pair names a cell that does not exist.
    UnknownCell { cell: String },
    /// tensor_product_1d input has faces.
    DimensionTooHigh { complex: &'static str },
    UnknownBuiltin { name: String },
    BadParam { detail: String },
    /// lift_classical: column weight is 0 or >= 3.
    BadColumnWeight { column: usize, weight: usize },
    /// lift_classical requires a binary parity matrix.
    NotBinary { modulus: u64 },
}

impl fmt::Display for CellError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellError::Invalid { cell, problem } => write!(f, "invalid complex at cell '{}': {}", cell, problem),
            CellError::IncoherentGluing { detail } => write!(f, "incoherent gluing: {}", detail),
            CellError::UnknownCell { cell } => write!(f, "gluing references unknown cell '{}'", cell),
            CellError::DimensionTooHigh { complex } => {
                write!(f, "tensor product requires at most 1-dimensional factors; {} operand has faces", complex)
            }
            CellError::UnknownBuiltin { name } => write!(f, "unknown builtin complex '{}'", name),
            CellError::BadParam { detail } => write!(f, "bad builtin parameter: {}", detail),
            CellError::BadColumnWeight { column, weight } => {
                write!(f, "column {} has weight {}; lifting needs weight 1 or 2", column + 1, weight)
            }
            CellError::NotBinary { modulus } => {
                write!(f, "classical lift needs a parity matrix over Z_2, got modulus {}", modulus)
            }
        }
    }
}

impl std::error::Error for CellError {}

impl CellComplex {
    pub fn cell_count(&self) -> usize {
        self.vertices.len() + self.edges.len() + self.faces.len()
    }

    fn vertex_index(&self) -> HashMap<&str, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect()
    }

    fn edge_index(&self) -> HashMap<&str, usize> {
        self.edges.iter().enumerate().map(|(i, e)| (e.name.as_str(), i)).collect()
    }

    fn face_index(&self) -> HashMap<&str, usize> {
        self.faces.iter().enumerate().map(|(i, f)| (f.name.as_str(), i)).collect()
    }

    /// Source of an oriented edge: s(-e) = t(e).
    fn oriented_src<'a>(&'a self, r: &OrientedCellRef, edges: &HashMap<&str, usize>) -> &'a str {
        let e = &self.edges[edges[r.cell.as_str()]];
        match r.sign {
            Sign::Plus => &e.src,
            Sign::Minus => &e.tgt,
        }
    }

    fn oriented_tgt<'a>(&'a self, r: &OrientedCellRef, edges: &HashMap<&str, usize>) -> &'a str {
        let e = &self.edges[edges[r.cell.as_str()]];
        match r.sign {
            Sign::Plus => &e.tgt,
            Sign::Minus => &e.src,
        }
    }

    /// Check all structural invariants; the error names the first violated cell.
    pub fn validate(&self) -> Result<(), CellError> {
        let mut seen: HashMap<&str, ()> = HashMap::new();
        for name in self
            .vertices
            .iter()
            .map(String::as_str)
            .chain(self.edges.iter().map(|e| e.name.as_str()))
            .chain(self.faces.iter().map(|f| f.name.as_str()))
        {
            if seen.insert(name, ()).is_some() {
                return Err(CellError::Invalid { cell: name.to_string(), problem: "duplicate cell name".into() });
            }
        }
        let verts = self.vertex_index();
        for e in &self.edges {
            for endpoint in [&e.src, &e.tgt] {
                if !verts.contains_key(endpoint.as_str()) {
                    return Err(CellError::Invalid {
                        cell: e.name.clone(),
                        problem: format!("endpoint '{}' is not a vertex", endpoint),
                    });
                }
            }
        }
        let edges = self.edge_index();
        for face in &self.faces {
            if face.boundary.is_empty() {
                return Err(CellError::Invalid { cell: face.name.clone(), problem: "empty boundary".into() });
            }
            for r in &face.boundary.refs {
                if !edges.contains_key(r.cell.as_str()) {
                    return Err(CellError::Invalid {
                        cell: face.name.clone(),
                        problem: format!("boundary references unknown edge '{}'", r.cell),
                    });
                }
            }
            let n = face.boundary.len();
            for i in 0..n {
                let cur = &face.boundary.refs[i];
                let next = &face.boundary.refs[(i + 1) % n];
                if self.oriented_tgt(cur, &edges) != self.oriented_src(next, &edges) {
                    return Err(CellError::Invalid { cell: face.name.clone(), problem: "circle not closed".into() });
                }
            }
        }
        Ok(())
    }

    /// Connected components of the 1-skeleton: count plus vertex partition.
    /// Isolated vertices are singleton components.
    pub fn connected_components(&self) -> (usize, Vec<Vec<String>>) {
        let verts = self.vertex_index();
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            uf.union(verts[e.src.as_str()], verts[e.tgt.as_str()]);
        }
        let mut groups: Vec<Vec<String>> = Vec::new();
        let mut root_to_group: HashMap<usize, usize> = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let root = uf.find(i);
            let g = *root_to_group.entry(root).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(v.clone());
        }
        (groups.len(), groups)
    }

    /// Disjoint union of cells. Colliding names are disambiguated by
    /// prefixing every cell of the left operand with "L_" and of the right
    /// with "R_"; disjoint inputs keep their names.
    pub fn direct_sum(&self, other: &CellComplex) -> CellComplex {
        let mine: std::collections::HashSet<&str> = self
            .vertices
            .iter()
            .map(String::as_str)
            .chain(self.edges.iter().map(|e| e.name.as_str()))
            .chain(self.faces.iter().map(|f| f.name.as_str()))
            .collect();
        let collides = other
            .vertices
            .iter()
            .map(String::as_str)
            .chain(other.edges.iter().map(|e| e.name.as_str()))
            .chain(other.faces.iter().map(|f| f.name.as_str()))
            .any(|n| mine.contains(n));
        let (lp, rp) = if collides { ("L_", "R_") } else { ("", "") };
        let rename = |prefix: &str, c: &CellComplex| -> CellComplex {
            CellComplex {
                vertices: c.vertices.iter().map(|v| format!("{prefix}{v}")).collect(),
                edges: c
                    .edges
                    .iter()
                    .map(|e| Edge {
                        name: format!("{prefix}{}", e.name),
                        src: format!("{prefix}{}", e.src),
                        tgt: format!("{prefix}{}", e.tgt),
                    })
                    .collect(),
                faces: c
                    .faces
                    .iter()
                    .map(|f| Face {
                        name: format!("{prefix}{}", f.name),
                        boundary: BoundaryCircle::new(
                            f.boundary
                                .refs
                                .iter()
                                .map(|r| OrientedCellRef { sign: r.sign, cell: format!("{prefix}{}", r.cell) })
                                .collect(),
                        ),
                    })
                    .collect(),
            }
        };
        let left = rename(lp, self);
        let right = rename(rp, other);
        CellComplex {
            vertices: left.vertices.into_iter().chain(right.vertices).collect(),
            edges: left.edges.into_iter().chain(right.edges).collect(),
            faces: left.faces.into_iter().chain(right.faces).collect(),
        }
    }

    /// Quotient by the coherence closure of the gluing spec.
    ///
    /// Edge identifications force endpoint identifications respecting
    /// orientation; face identifications are checked for boundary agreement
    /// up to rotation under the resulting edge equivalence. The quotient
    /// keeps one canonical representative per class: the earliest cell in
    /// input order, with positive orientation.
    pub fn quotient(&self, gluing: &GluingSpec) -> Result<CellComplex, CellError> {
        let verts = self.vertex_index();
        let edges = self.edge_index();
        let faces = self.face_index();

        let mut vert_uf = UnionFind::new(self.vertices.len());
        let mut edge_uf = SignedUnionFind::new(self.edges.len());
        let mut face_uf = SignedUnionFind::new(self.faces.len());

        for (a, b) in &gluing.vertex_pairs {
            let (ia, ib) = (
                *verts.get(a.as_str()).ok_or(CellError::UnknownCell { cell: a.clone() })?,
                *verts.get(b.as_str()).ok_or(CellError::UnknownCell { cell: b.clone() })?,
            );
            vert_uf.union(ia, ib);
        }
        for (a, b) in &gluing.edge_pairs {
            let ia = *edges.get(a.cell.as_str()).ok_or(CellError::UnknownCell { cell: a.cell.clone() })?;
            let ib = *edges.get(b.cell.as_str()).ok_or(CellError::UnknownCell { cell: b.cell.clone() })?;
            let rel = a.sign.combine(b.sign);
            edge_uf.union(ia, ib, rel).map_err(|()| CellError::IncoherentGluing {
                detail: format!("gluing {} ~ {} identifies an edge with its own inverse", a, b),
            })?;
        }
        for (a, b) in &gluing.face_pairs {
            let ia = *faces.get(a.cell.as_str()).ok_or(CellError::UnknownCell { cell: a.cell.clone() })?;
            let ib = *faces.get(b.cell.as_str()).ok_or(CellError::UnknownCell { cell: b.cell.clone() })?;
            let rel = a.sign.combine(b.sign);
            face_uf.union(ia, ib, rel).map_err(|()| CellError::IncoherentGluing {
                detail: format!("gluing {} ~ {} identifies a face with its own inverse", a, b),
            })?;
        }

        // Coherence closure: equivalent edges force endpoint identifications.
        for (i, e) in self.edges.iter().enumerate() {
            let (root, sign) = edge_uf.find(i);
            if root == i {
                continue;
            }
            let r = &self.edges[root];
            match sign {
                Sign::Plus => {
                    vert_uf.union(verts[e.src.as_str()], verts[r.src.as_str()]);
                    vert_uf.union(verts[e.tgt.as_str()], verts[r.tgt.as_str()]);
                }
                Sign::Minus => {
                    vert_uf.union(verts[e.src.as_str()], verts[r.tgt.as_str()]);
                    vert_uf.union(verts[e.tgt.as_str()], verts[r.src.as_str()]);
                }
            }
        }

        // Canonical representatives: smallest input index per class.
        let mut vert_rep: Vec<usize> = (0..self.vertices.len()).collect();
        for i in 0..self.vertices.len() {
            let root = vert_uf.find(i);
            if i < vert_rep[root] {
                vert_rep[root] = i;
            }
        }
        let vert_canon = |i: usize, uf: &mut UnionFind| -> usize { vert_rep[uf.find(i)] };

        let mut edge_rep: Vec<usize> = (0..self.edges.len()).collect();
        for i in 0..self.edges.len() {
            let (root, _) = edge_uf.find(i);
            if i < edge_rep[root] {
                edge_rep[root] = i;
            }
        }
        // Sign of each edge relative to its canonical representative.
        let edge_canon = |i: usize, uf: &mut SignedUnionFind| -> (usize, Sign) {
            let (root, si) = uf.find(i);
            let rep = edge_rep[root];
            let (_, srep) = uf.find(rep);
            (rep, si.combine(srep))
        };

        let mut face_rep: Vec<usize> = (0..self.faces.len()).collect();
        for i in 0..self.faces.len() {
            let (root, _) = face_uf.find(i);
            if i < face_rep[root] {
                face_rep[root] = i;
            }
        }

        // Map a boundary circle through the edge equivalence.
        let map_circle = |circle: &BoundaryCircle, uf: &mut SignedUnionFind| -> BoundaryCircle {
            BoundaryCircle::new(
                circle
                    .refs
                    .iter()
                    .map(|r| {
                        let (rep, s) = edge_canon(edges[r.cell.as_str()], uf);
                        OrientedCellRef { sign: r.sign.combine(s), cell: self.edges[rep].name.clone() }
                    })
                    .collect(),
            )
        };

        // Face coherence: glued faces must have matching boundary circles up
        // to rotation, after mapping through the edge equivalence.
        for (i, f) in self.faces.iter().enumerate() {
            let (root, sign) = face_uf.find(i);
            if root == i {
                continue;
            }
            let own = map_circle(&f.boundary, &mut edge_uf);
            let own = if sign == Sign::Plus { own } else { own.negated() };
            let root_circle = map_circle(&self.faces[root].boundary, &mut edge_uf);
            if !own.eq_up_to_rotation(&root_circle) {
                return Err(CellError::IncoherentGluing {
                    detail: format!(
                        "faces '{}' and '{}' are glued but their boundaries {} and {} do not match",
                        f.name, self.faces[root].name, own, root_circle
                    ),
                });
            }
        }

        let mut vertices = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if vert_canon(i, &mut vert_uf) == i {
                vertices.push(v.clone());
            }
        }
        let mut out_edges = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if edge_canon(i, &mut edge_uf).0 == i {
                out_edges.push(Edge {
                    name: e.name.clone(),
                    src: self.vertices[vert_canon(verts[e.src.as_str()], &mut vert_uf)].clone(),
                    tgt: self.vertices[vert_canon(verts[e.tgt.as_str()], &mut vert_uf)].clone(),
                });
            }
        }
        let mut out_faces = Vec::new();
        for (i, f) in self.faces.iter().enumerate() {
            let (root, _) = face_uf.find(i);
            if face_rep[root] == i {
                out_faces.push(Face { name: f.name.clone(), boundary: map_circle(&f.boundary, &mut edge_uf) });
            }
        }
        let result = CellComplex { vertices, edges: out_edges, faces: out_faces };
        debug_assert!(result.validate().is_ok(), "quotient broke complex invariants");
        Ok(result)
    }

    /// Product of two at-most-1-dimensional complexes; product cells have
    /// dimension dim(a) + dim(b), so the result is at most 2-dimensional.
    pub fn tensor_product_1d(&self, other: &CellComplex) -> Result<CellComplex, CellError> {
        if !self.faces.is_empty() {
            return Err(CellError::DimensionTooHigh { complex: "left" });
        }
        if !other.faces.is_empty() {
            return Err(CellError::DimensionTooHigh { complex: "right" });
        }
        let name = |a: &str, b: &str| format!("{a}_x_{b}");
        let mut vertices = Vec::new();
        for a in &self.vertices {
            for b in &other.vertices {
                vertices.push(name(a, b));
            }
        }
        let mut edges = Vec::new();
        // Degree split (0,1) first, then (1,0): lexicographic by (split, left, right).
        for a in &self.vertices {
            for f in &other.edges {
                edges.push(Edge { name: name(a, &f.name), src: name(a, &f.src), tgt: name(a, &f.tgt) });
            }
        }
        for e in &self.edges {
            for b in &other.vertices {
                edges.push(Edge { name: name(&e.name, b), src: name(&e.src, b), tgt: name(&e.tgt, b) });
            }
        }
        let mut faces = Vec::new();
        for e in &self.edges {
            for f in &other.edges {
                // Boundary circle of the product square:
                // e x s(f), t(e) x f, -(e x t(f)), -(s(e) x f).
                let boundary = BoundaryCircle::new(vec![
                    OrientedCellRef::plus(name(&e.name, &f.src)),
                    OrientedCellRef::plus(name(&e.tgt, &f.name)),
                    OrientedCellRef::minus(name(&e.name, &f.tgt)),
                    OrientedCellRef::minus(name(&e.src, &f.name)),
                ]);
                faces.push(Face { name: name(&e.name, &f.name), boundary });
            }
        }
        let result = CellComplex { vertices, edges, faces };
        debug_assert!(result.validate().is_ok(), "tensor product broke complex invariants");
        Ok(result)
    }
}

/// Lift a binary parity matrix to a 1-dimensional cell complex: one vertex
/// per check row, a point at infinity for the weight-1 columns, one edge per
/// bit column. Reducing the resulting boundary matrix mod 2 and dropping the
/// infinity row reproduces the input.
pub fn lift_classical(parity: &ModMatrix) -> Result<CellComplex, CellError> {
    if parity.modulus() != 2 {
        return Err(CellError::NotBinary { modulus: parity.modulus() });
    }
    let mut needs_infinity = false;
    let mut columns: Vec<(usize, Option<usize>)> = Vec::new();
    for c in 0..parity.cols() {
        let rows: Vec<usize> = (0..parity.rows()).filter(|&r| parity.at(r, c) != 0).collect();
        match rows.as_slice() {
            [i] => {
                needs_infinity = true;
                columns.push((*i, None));
            }
            [i, j] => columns.push((*i, Some(*j))),
            other => {
                return Err(CellError::BadColumnWeight { column: c, weight: other.len() });
            }
        }
    }
    let mut vertices: Vec<String> = (1..=parity.rows()).map(|i| format!("v{i}")).collect();
    if needs_infinity {
        vertices.push("v_inf".to_string());
    }
    let edges = columns
        .into_iter()
        .enumerate()
        .map(|(c, (i, j))| Edge {
            name: format!("e{}", c + 1),
            src: format!("v{}", i + 1),
            tgt: match j {
                Some(j) => format!("v{}", j + 1),
                None => "v_inf".to_string(),
            },
        })
        .collect();
    Ok(CellComplex { vertices, edges, faces: vec![] })
}

/// The named cellulations with their original labels and orientations.
pub fn builtin(name: &str, param: Option<u64>) -> Result<CellComplex, CellError> {
    let no_param = |param: Option<u64>| -> Result<(), CellError> {
        match param {
            None => Ok(()),
            Some(p) => Err(CellError::BadParam { detail: format!("builtin takes no parameter, got {p}") }),
        }
    };
    match name {
        "square" => {
            no_param(param)?;
            Ok(gluing_square())
        }
        "cylinder" => {
            no_param(param)?;
            let spec = GluingSpec {
                edge_pairs: vec![(OrientedCellRef::plus("e1"), OrientedCellRef::minus("e3"))],
                ..Default::default()
            };
            gluing_square().quotient(&spec)
        }
        "moebius" => {
            no_param(param)?;
            let spec = GluingSpec {
                edge_pairs: vec![(OrientedCellRef::plus("e1"), OrientedCellRef::plus("e3"))],
                ..Default::default()
            };
            gluing_square().quotient(&spec)
        }
        "klein" => {
            no_param(param)?;
            let spec = GluingSpec {
                edge_pairs: vec![
                    (OrientedCellRef::plus("e1"), OrientedCellRef::minus("e3")),
                    (OrientedCellRef::plus("e2"), OrientedCellRef::plus("e4")),
                ],
                ..Default::default()
            };
            gluing_square().quotient(&spec)
        }
        "rp2_square" => {
            no_param(param)?;
            let spec = GluingSpec {
                edge_pairs: vec![
                    (OrientedCellRef::plus("e1"), OrientedCellRef::plus("e3")),
                    (OrientedCellRef::plus("e2"), OrientedCellRef::plus("e4")),
                ],
                ..Default::default()
            };
            gluing_square().quotient(&spec)
        }
        "torus" => {
            no_param(param)?;
            Ok(torus())
        }
        "torus_filled" => {
            no_param(param)?;
            let mut t = torus();
            t.faces.push(Face {
                name: "f3".into(),
                boundary: BoundaryCircle::new(vec![OrientedCellRef::plus("e4"), OrientedCellRef::plus("e5")]),
            });
            Ok(t)
        }
        "rp2_halfsphere" => {
            no_param(param)?;
            Ok(rp2_halfsphere())
        }
        "polygon_torsion" => {
            let q = param.ok_or(CellError::BadParam { detail: "polygon_torsion needs a parameter q >= 2".into() })?;
            if q < 2 {
                return Err(CellError::BadParam { detail: format!("polygon_torsion needs q >= 2, got {q}") });
            }
            let mut refs = Vec::new();
            for _ in 0..q {
                refs.push(OrientedCellRef::plus("e1"));
                refs.push(OrientedCellRef::plus("e2"));
            }
            Ok(CellComplex {
                vertices: vec!["v1".into(), "v2".into()],
                edges: vec![
                    Edge { name: "e1".into(), src: "v1".into(), tgt: "v2".into() },
                    Edge { name: "e2".into(), src: "v2".into(), tgt: "v1".into() },
                ],
                faces: vec![Face { name: "f1".into(), boundary: BoundaryCircle::new(refs) }],
            })
        }
        "circle" => {
            let n = param.ok_or(CellError::BadParam { detail: "circle needs a parameter n >= 1".into() })?;
            if n < 1 {
                return Err(CellError::BadParam { detail: "circle needs n >= 1".into() });
            }
            let vertices: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
            let edges = (1..=n)
                .map(|i| Edge {
                    name: format!("e{i}"),
                    src: format!("v{i}"),
                    tgt: format!("v{}", if i == n { 1 } else { i + 1 }),
                })
                .collect();
            Ok(CellComplex { vertices, edges, faces: vec![] })
        }
        "line" => {
            let n = param.ok_or(CellError::BadParam { detail: "line needs a parameter n >= 1".into() })?;
            if n < 1 {
                return Err(CellError::BadParam { detail: "line needs n >= 1".into() });
            }
            let vertices: Vec<String> = (1..=n + 1).map(|i| format!("v{i}")).collect();
            let edges = (1..=n)
                .map(|i| Edge { name: format!("e{i}"), src: format!("v{i}"), tgt: format!("v{}", i + 1) })
                .collect();
            Ok(CellComplex { vertices, edges, faces: vec![] })
        }
        other => Err(CellError::UnknownBuiltin { name: other.to_string() }),
    }
}

/// All builtin names; parameterized ones paired with a representative parameter.
pub fn builtin_names() -> Vec<(&'static str, Option<u64>)> {
    vec![
        ("square", None),
        ("cylinder", None),
        ("moebius", None),
        ("torus", None),
        ("torus_filled", None),
        ("klein", None),
        ("rp2_square", None),
        ("rp2_halfsphere", None),
        ("polygon_torsion", Some(3)),
        ("circle", Some(3)),
        ("line", Some(3)),
    ]
}

fn gluing_square() -> CellComplex {
    CellComplex {
        vertices: vec!["v1".into(), "v2".into(), "v3".into(), "v4".into()],
        edges: vec![
            Edge { name: "e1".into(), src: "v1".into(), tgt: "v2".into() },
            Edge { name: "e2".into(), src: "v2".into(), tgt: "v3".into() },
            Edge { name: "e3".into(), src: "v3".into(), tgt: "v4".into() },
            Edge { name: "e4".into(), src: "v4".into(), tgt: "v1".into() },
        ],
        faces: vec![Face {
            name: "f1".into(),
            boundary: BoundaryCircle::new(vec![
                OrientedCellRef::plus("e1"),
                OrientedCellRef::plus("e2"),
                OrientedCellRef::plus("e3"),
                OrientedCellRef::plus("e4"),
            ]),
        }],
    }
}

fn torus() -> CellComplex {
    CellComplex {
        vertices: vec!["v1".into(), "v2".into(), "v3".into()],
        edges: vec![
            Edge { name: "e1".into(), src: "v1".into(), tgt: "v2".into() },
            Edge { name: "e2".into(), src: "v2".into(), tgt: "v1".into() },
            Edge { name: "e3".into(), src: "v1".into(), tgt: "v1".into() },
            Edge { name: "e4".into(), src: "v2".into(), tgt: "v3".into() },
            Edge { name: "e5".into(), src: "v3".into(), tgt: "v2".into() },
        ],
        faces: vec![
            Face {
                name: "f1".into(),
                boundary: BoundaryCircle::new(vec![
                    OrientedCellRef::plus("e1"),
                    OrientedCellRef::plus("e4"),
                    OrientedCellRef::plus("e5"),
                    OrientedCellRef::minus("e1"),
                    OrientedCellRef::minus("e3"),
                ]),
            },
            Face {
                name: "f2".into(),
                boundary: BoundaryCircle::new(vec![
                    OrientedCellRef::plus("e2"),
                    OrientedCellRef::plus("e3"),
                    OrientedCellRef::minus("e2"),
                    OrientedCellRef::minus("e5"),
                    OrientedCellRef::minus("e4"),
                ]),
            },
        ],
    }
}

fn rp2_halfsphere() -> CellComplex {
    CellComplex {
        vertices: vec!["v1".into(), "v2".into(), "v3".into()],
        edges: vec![
            Edge { name: "e1".into(), src: "v1".into(), tgt: "v2".into() },
            Edge { name: "e2".into(), src: "v2".into(), tgt: "v1".into() },
            Edge { name: "e3".into(), src: "v2".into(), tgt: "v3".into() },
            Edge { name: "e4".into(), src: "v3".into(), tgt: "v2".into() },
            Edge { name: "e5".into(), src: "v1".into(), tgt: "v3".into() },
            Edge { name: "e6".into(), src: "v3".into(), tgt: "v1".into() },
        ],
        faces: vec![
            Face {
                name: "f1".into(),
                boundary: BoundaryCircle::new(vec![OrientedCellRef::plus("e1"), OrientedCellRef::plus("e2")]),
            },
            Face {
                name: "f2".into(),
                boundary: BoundaryCircle::new(vec![OrientedCellRef::plus("e3"), OrientedCellRef::plus("e4")]),
            },
            Face {
                name: "f3".into(),
                boundary: BoundaryCircle::new(vec![OrientedCellRef::plus("e5"), OrientedCellRef::plus("e6")]),
            },
            Face {
                name: "f4".into(),
                boundary: BoundaryCircle::new(vec![
                    OrientedCellRef::minus("e6"),
                    OrientedCellRef::plus("e4"),
                    OrientedCellRef::plus("e2"),
                    OrientedCellRef::plus("e5"),
                    OrientedCellRef::minus("e3"),
                    OrientedCellRef::minus("e1"),
                ]),
            },
        ],
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb] = ra;
        }
    }
}

/// Union-find over oriented cells: each element carries its sign relative to
/// its parent, so identifying a cell with its own inverse is detectable.
struct SignedUnionFind {
    parent: Vec<usize>,
    sign: Vec<Sign>,
}

impl SignedUnionFind {
    fn new(n: usize) -> Self {
        SignedUnionFind { parent: (0..n).collect(), sign: vec![Sign::Plus; n] }
    }

    /// Returns (root, sign of x relative to root).
    fn find(&mut self, x: usize) -> (usize, Sign) {
        if self.parent[x] == x {
            return (x, self.sign[x]);
        }
        let (root, parent_sign) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.sign[x] = self.sign[x].combine(parent_sign);
        (root, self.sign[x])
    }

    /// Declare a ~ rel·b. Err(()) when this would identify a cell with its
    /// own inverse.
    fn union(&mut self, a: usize, b: usize, rel: Sign) -> Result<(), ()> {
        let (ra, sa) = self.find(a);
        let (rb, sb) = self.find(b);
        if ra == rb {
            // a = sa·r and b = sb·r, so a = rel·b forces sa = rel·sb.
            if sa != rel.combine(sb) {
                return Err(());
            }
            return Ok(());
        }
        // a = sa·ra, b = sb·rb, want a = rel·b => ra = sa·rel·sb·rb.
        self.parent[rb] = ra;
        self.sign[rb] = sa.combine(rel).combine(sb);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The two-triangle square of the worked attaching-map example:
    /// 4 vertices, 5 edges, 2 triangular faces.
    pub fn two_triangle_square() -> CellComplex {
        CellComplex {
            vertices: vec!["v1".into(), "v2".into(), "v3".into(), "v4".into()],
            edges: vec![
                Edge { name: "e1".into(), src: "v1".into(), tgt: "v2".into() },
                Edge { name: "e2".into(), src: "v2".into(), tgt: "v4".into() },
                Edge { name: "e3".into(), src: "v4".into(), tgt: "v1".into() },
                Edge { name: "e4".into(), src: "v2".into(), tgt: "v3".into() },
                Edge { name: "e5".into(), src: "v3".into(), tgt: "v4".into() },
            ],
            faces: vec![
                Face {
                    name: "f1".into(),
                    boundary: BoundaryCircle::new(vec![
                        OrientedCellRef::plus("e1"),
                        OrientedCellRef::plus("e2"),
                        OrientedCellRef::plus("e3"),
                    ]),
                },
                Face {
                    name: "f2".into(),
                    boundary: BoundaryCircle::new(vec![
                        OrientedCellRef::minus("e2"),
                        OrientedCellRef::plus("e4"),
                        OrientedCellRef::plus("e5"),
                    ]),
                },
            ],
        }
    }

    #[test]
    fn two_triangle_square_is_valid() {
        assert!(two_triangle_square().validate().is_ok());
    }

    #[test]
    fn open_circle_is_rejected() {
        let x = CellComplex {
            vertices: vec!["v1".into(), "v2".into()],
            edges: vec![Edge { name: "e1".into(), src: "v1".into(), tgt: "v2".into() }],
            faces: vec![Face {
                name: "f1".into(),
                boundary: BoundaryCircle::new(vec![OrientedCellRef::plus("e1")]),
            }],
        };
        match x.validate() {
            Err(CellError::Invalid { cell, problem }) => {
                assert_eq!(cell, "f1");
                assert!(problem.contains("not closed"));
            }
            other => panic!("expected closure diagnostic, got {:?}", other),
        }
    }

    #[test]
    fn empty_boundary_is_rejected() {
        let x = CellComplex {
            vertices: vec!["v1".into()],
            edges: vec![],
            faces: vec![Face { name: "f1".into(), boundary: BoundaryCircle::new(vec![]) }],
        };
        match x.validate() {
            Err(CellError::Invalid { cell, problem }) => {
                assert_eq!(cell, "f1");
                assert!(problem.contains("empty boundary"));
            }
            other => panic!("expected empty-boundary diagnostic, got {:?}", other),
        }
    }

    #[test]
    fn quotient_square_to_cylinder() {
        let spec = GluingSpec {
            edge_pairs: vec![(OrientedCellRef::plus("e1"), OrientedCellRef::minus("e3"))],
            ..Default::default()
        };
        let cyl = gluing_square().quotient(&spec).unwrap();
        assert_eq!(cyl.vertices, vec!["v1", "v2"]);
        assert_eq!(cyl.edges.len(), 3);
        assert_eq!(cyl.faces.len(), 1);
        let expected = BoundaryCircle::new(vec![
            OrientedCellRef::plus("e1"),
            OrientedCellRef::plus("e2"),
            OrientedCellRef::minus("e1"),
            OrientedCellRef::plus("e4"),
        ]);
        assert_eq!(cyl.faces[0].boundary, expected);
    }

    #[test]
    fn quotient_square_to_moebius() {
        let spec = GluingSpec {
            edge_pairs: vec![(OrientedCellRef::plus("e1"), OrientedCellRef::plus("e3"))],
            ..Default::default()
        };
        let moeb = gluing_square().quotient(&spec).unwrap();
        assert_eq!(moeb.vertices.len(), 2);
        assert_eq!(moeb.edges.len(), 3);
        // Canonical representatives keep the original labels; the glued edge
        // is traversed twice with the same orientation.
        let expected = BoundaryCircle::new(vec![
            OrientedCellRef::plus("e1"),
            OrientedCellRef::plus("e2"),
            OrientedCellRef::plus("e1"),
            OrientedCellRef::plus("e4"),
        ]);
        assert_eq!(moeb.faces[0].boundary, expected);
    }

    #[test]
    fn quotient_rejects_self_inverse() {
        let spec = GluingSpec {
            edge_pairs: vec![(OrientedCellRef::plus("e1"), OrientedCellRef::minus("e1"))],
            ..Default::default()
        };
        assert!(matches!(
            gluing_square().quotient(&spec),
            Err(CellError::IncoherentGluing { .. })
        ));
        // Transitive case: e1 ~ e3 and e1 ~ -e3 force e1 ~ -e1.
        let spec = GluingSpec {
            edge_pairs: vec![
                (OrientedCellRef::plus("e1"), OrientedCellRef::plus("e3")),
                (OrientedCellRef::plus("e1"), OrientedCellRef::minus("e3")),
            ],
            ..Default::default()
        };
        assert!(matches!(
            gluing_square().quotient(&spec),
            Err(CellError::IncoherentGluing { .. })
        ));
    }

    #[test]
    fn quotient_face_gluing_checks_boundaries() {
        // Two triangles sharing all edges, opposite orientations: coherent.
        let x = CellComplex {
            vertices: vec!["v1".into(), "v2".into(), "v3".into()],
            edges: vec![
                Edge { name: "e1".into(), src: "v1".into(), tgt: "v2".into() },
                Edge { name: "e2".into(), src: "v2".into(), tgt: "v3".into() },
                Edge { name: "e3".into(), src: "v3".into(), tgt: "v1".into() },
            ],
            faces: vec![
                Face {
                    name: "f1".into(),
                    boundary: BoundaryCircle::new(vec![
                        OrientedCellRef::plus("e1"),
                        OrientedCellRef::plus("e2"),
                        OrientedCellRef::plus("e3"),
                    ]),
                },
                Face {
                    name: "f2".into(),
                    boundary: BoundaryCircle::new(vec![
                        OrientedCellRef::plus("e1"),
                        OrientedCellRef::plus("e2"),
                        OrientedCellRef::plus("e3"),
                    ]),
                },
            ],
        };
        let ok = GluingSpec {
            face_pairs: vec![(OrientedCellRef::plus("f1"), OrientedCellRef::plus("f2"))],
            ..Default::default()
        };
        let q = x.quotient(&ok).unwrap();
        assert_eq!(q.faces.len(), 1);
        // Opposite orientation does not match the boundary circle.
        let bad = GluingSpec {
            face_pairs: vec![(OrientedCellRef::plus("f1"), OrientedCellRef::minus("f2"))],
            ..Default::default()
        };
        assert!(matches!(x.quotient(&bad), Err(CellError::IncoherentGluing { .. })));
    }

    #[test]
    fn direct_sum_counts_and_components() {
        let t = builtin("torus", None).unwrap();
        let s = t.direct_sum(&t);
        assert_eq!(s.vertices.len(), 6);
        assert_eq!(s.edges.len(), 10);
        assert_eq!(s.faces.len(), 4);
        assert!(s.validate().is_ok());
        assert_eq!(s.connected_components().0, 2);
        let mixed = t.direct_sum(&builtin("rp2_halfsphere", None).unwrap());
        assert_eq!(mixed.connected_components().0, 2);
        // Sum with the empty complex keeps the cells.
        let empty = CellComplex::default();
        let same = t.direct_sum(&empty);
        assert_eq!(same, t);
    }

    #[test]
    fn connected_components_isolated_vertices() {
        let x = CellComplex {
            vertices: vec!["a".into(), "b".into(), "c".into()],
            edges: vec![],
            faces: vec![],
        };
        let (n, parts) = x.connected_components();
        assert_eq!(n, 3);
        assert_eq!(parts, vec![vec!["a"], vec!["b"], vec!["c"]]);
    }

    #[test]
    fn tensor_of_self_loops_is_minimal_torus() {
        let loop1 = CellComplex {
            vertices: vec!["v".into()],
            edges: vec![Edge { name: "e".into(), src: "v".into(), tgt: "v".into() }],
            faces: vec![],
        };
        let p = loop1.tensor_product_1d(&loop1).unwrap();
        assert_eq!((p.vertices.len(), p.edges.len(), p.faces.len()), (1, 2, 1));
        assert!(p.validate().is_ok());
    }

    #[test]
    fn tensor_of_lines_is_one_square() {
        let line = builtin("line", Some(1)).unwrap();
        let p = line.tensor_product_1d(&line).unwrap();
        assert_eq!((p.vertices.len(), p.edges.len(), p.faces.len()), (4, 4, 1));
        assert!(p.validate().is_ok());
    }

    #[test]
    fn tensor_of_circles_counts() {
        let c3 = builtin("circle", Some(3)).unwrap();
        let p = c3.tensor_product_1d(&c3).unwrap();
        assert_eq!((p.vertices.len(), p.edges.len(), p.faces.len()), (9, 18, 9));
        assert!(p.validate().is_ok());
    }

    #[test]
    fn tensor_rejects_faces() {
        let t = builtin("torus", None).unwrap();
        let line = builtin("line", Some(1)).unwrap();
        assert!(matches!(line.tensor_product_1d(&t), Err(CellError::DimensionTooHigh { .. })));
    }

    #[test]
    fn builtins_validate() {
        for (name, param) in builtin_names() {
            let x = builtin(name, param).unwrap();
            assert!(x.validate().is_ok(), "builtin {name} failed validation");
        }
        for q in 2..=6 {
            assert!(builtin("polygon_torsion", Some(q)).unwrap().validate().is_ok());
        }
        assert!(matches!(builtin("dodecahedron", None), Err(CellError::UnknownBuiltin { .. })));
        assert!(matches!(builtin("polygon_torsion", Some(1)), Err(CellError::BadParam { .. })));
        assert!(matches!(builtin("circle", None), Err(CellError::BadParam { .. })));
    }

    #[test]
    fn builtin_shapes_match_their_figures() {
        let t = builtin("torus", None).unwrap();
        assert_eq!((t.vertices.len(), t.edges.len(), t.faces.len()), (3, 5, 2));
        let r = builtin("rp2_halfsphere", None).unwrap();
        assert_eq!((r.vertices.len(), r.edges.len(), r.faces.len()), (3, 6, 4));
        let p = builtin("polygon_torsion", Some(3)).unwrap();
        let expected = BoundaryCircle::new(
            ["e1", "e2", "e1", "e2", "e1", "e2"].iter().map(|e| OrientedCellRef::plus(*e)).collect(),
        );
        assert_eq!(p.faces[0].boundary, expected);
    }

    #[test]
    fn circle_negation_is_involution() {
        let c = BoundaryCircle::new(vec![
            OrientedCellRef::plus("e1"),
            OrientedCellRef::minus("e2"),
            OrientedCellRef::plus("e3"),
        ]);
        assert_eq!(c.negated().negated(), c);
        // Rotation invariance of equality.
        let rotated = BoundaryCircle::new(vec![
            OrientedCellRef::plus("e3"),
            OrientedCellRef::plus("e1"),
            OrientedCellRef::minus("e2"),
        ]);
        assert_eq!(c, rotated);
    }

    #[test]
    fn lift_313_parity() {
        let p = ModMatrix::from_rows(2, &[vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        let x = lift_classical(&p).unwrap();
        assert_eq!(x.vertices, vec!["v1", "v2", "v_inf"]);
        assert_eq!(x.edges.len(), 3);
        assert_eq!(x.edges[0], Edge { name: "e1".into(), src: "v1".into(), tgt: "v2".into() });
        assert_eq!(x.edges[1], Edge { name: "e2".into(), src: "v1".into(), tgt: "v_inf".into() });
        assert_eq!(x.edges[2], Edge { name: "e3".into(), src: "v2".into(), tgt: "v_inf".into() });
    }

    #[test]
    fn lift_weight_two_only_skips_infinity() {
        let p = ModMatrix::from_rows(2, &[vec![1], vec![1]]).unwrap();
        let x = lift_classical(&p).unwrap();
        assert_eq!(x.vertices, vec!["v1", "v2"]);
        assert_eq!(x.edges.len(), 1);
    }

    #[test]
    fn lift_rejects_heavy_columns() {
        let p = ModMatrix::from_rows(2, &[vec![1], vec![1], vec![1]]).unwrap();
        assert_eq!(lift_classical(&p), Err(CellError::BadColumnWeight { column: 0, weight: 3 }));
        let z = ModMatrix::from_rows(2, &[vec![0], vec![0]]).unwrap();
        assert_eq!(lift_classical(&z), Err(CellError::BadColumnWeight { column: 0, weight: 0 }));
    }
}
