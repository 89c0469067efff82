//! The primal and dual LPs of each game, constraint matrices, total
//! unimodularity and half-integrality checks.
//!
//! Variables and constraints are laid out canonically: vertices in input
//! order, then edges in input order. Primal variables are named `x(a,b)`;
//! dual vertex variables `u(name)` (left side) or `v(name)` (right side and
//! general graphs), Hoffman-Kruskal edge duals `y(a,b)` and `z(a,b)`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::game::{GameInstance, GameKind, Side};
use crate::lp::{rank, LinearProgram, LpSolution, Relation, Sense};
use crate::rational::Rational;

pub fn primal_name(instance: &GameInstance, e: usize) -> String {
    format!("x{}", instance.edge_label(e))
}

pub fn dual_vertex_name(instance: &GameInstance, v: usize) -> String {
    let vertex = &instance.vertices[v];
    match vertex.side {
        Side::U => format!("u({})", vertex.name),
        Side::V | Side::Single => format!("v({})", vertex.name),
    }
}

/// Column positions of the dual LP's variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualLayout {
    pub vertices: usize,
    /// `y_e` column per edge (Hoffman-Kruskal only).
    pub lower: Vec<Option<usize>>,
    /// `z_e` column per edge with an upper bound (Hoffman-Kruskal only).
    pub upper: Vec<Option<usize>>,
    pub width: usize,
}

impl DualLayout {
    pub fn of(instance: &GameInstance) -> Self {
        let n = instance.num_vertices();
        let m = instance.num_edges();
        if instance.kind != GameKind::HoffmanKruskal {
            return DualLayout {
                vertices: n,
                lower: vec![None; m],
                upper: vec![None; m],
                width: n,
            };
        }
        let lower = (0..m).map(|e| Some(n + e)).collect();
        let mut next = n + m;
        let upper = instance
            .edges
            .iter()
            .map(|e| {
                e.upper.map(|_| {
                    next += 1;
                    next - 1
                })
            })
            .collect();
        DualLayout {
            vertices: n,
            lower,
            upper,
            width: next,
        }
    }
}

fn vertex_rhs(instance: &GameInstance, v: usize) -> Rational {
    Rational::from(instance.capacity(v))
}

/// LP (3) for assignment, (5) for b-matching kinds, (7) for
/// Hoffman-Kruskal, (9) for general graphs.
pub fn build_primal(instance: &GameInstance) -> LinearProgram {
    let mut lp = LinearProgram::new(Sense::Maximize);
    for (e, edge) in instance.edges.iter().enumerate() {
        lp.add_nonnegative(primal_name(instance, e), edge.weight.clone())
            .expect("edge labels are unique");
    }
    for v in 0..instance.num_vertices() {
        let terms: Vec<(usize, Rational)> =
            instance.incident(v).map(|e| (e, Rational::one())).collect();
        lp.add_sparse_constraint(
            format!("capacity({})", instance.vertices[v].name),
            &terms,
            Relation::Le,
            vertex_rhs(instance, v),
        )
        .expect("indices in range");
    }
    if instance.kind == GameKind::HoffmanKruskal {
        for (e, edge) in instance.edges.iter().enumerate() {
            lp.add_sparse_constraint(
                format!("lower{}", instance.edge_label(e)),
                &[(e, Rational::one())],
                Relation::Ge,
                Rational::from(edge.lower),
            )
            .expect("indices in range");
        }
        for (e, edge) in instance.edges.iter().enumerate() {
            if let Some(d) = edge.upper {
                lp.add_sparse_constraint(
                    format!("upper{}", instance.edge_label(e)),
                    &[(e, Rational::one())],
                    Relation::Le,
                    Rational::from(d),
                )
                .expect("indices in range");
            }
        }
    }
    lp
}

/// LP (4), (6), (8) or (10). Edges without an upper bound get no `z`
/// variable.
pub fn build_dual(instance: &GameInstance) -> LinearProgram {
    let layout = DualLayout::of(instance);
    let mut lp = LinearProgram::new(Sense::Minimize);
    for v in 0..instance.num_vertices() {
        lp.add_nonnegative(dual_vertex_name(instance, v), vertex_rhs(instance, v))
            .expect("vertex names are unique");
    }
    for (e, edge) in instance.edges.iter().enumerate() {
        if layout.lower[e].is_some() {
            lp.add_nonnegative(format!("y{}", instance.edge_label(e)), -Rational::from(edge.lower))
                .expect("edge labels are unique");
        }
    }
    for (e, edge) in instance.edges.iter().enumerate() {
        if let (Some(_), Some(d)) = (layout.upper[e], edge.upper) {
            lp.add_nonnegative(format!("z{}", instance.edge_label(e)), Rational::from(d))
                .expect("edge labels are unique");
        }
    }
    for (e, edge) in instance.edges.iter().enumerate() {
        let mut terms = vec![(edge.a, Rational::one()), (edge.b, Rational::one())];
        if let Some(y) = layout.lower[e] {
            terms.push((y, -Rational::one()));
        }
        if let Some(z) = layout.upper[e] {
            terms.push((z, Rational::one()));
        }
        lp.add_sparse_constraint(
            format!("cover{}", instance.edge_label(e)),
            &terms,
            Relation::Ge,
            edge.weight.clone(),
        )
        .expect("indices in range");
    }
    lp
}

/// Odd vertex subsets of size at least 3, as bitmasks in increasing order.
pub fn odd_sets(n: usize) -> Vec<u64> {
    (0u64..1 << n)
        .filter(|m| m.count_ones() >= 3 && m.count_ones() % 2 == 1)
        .collect()
}

fn check_general(instance: &GameInstance, operation: &'static str, cap: usize) -> Result<()> {
    if instance.kind != GameKind::GeneralMatching {
        return Err(Error::WrongKind {
            operation,
            kind: instance.kind,
        });
    }
    if instance.num_vertices() > cap {
        return Err(Error::CapExceeded {
            what: "vertex",
            limit: cap,
            actual: instance.num_vertices(),
        });
    }
    Ok(())
}

fn set_name(instance: &GameInstance, mask: u64) -> String {
    let names: Vec<&str> = (0..instance.num_vertices())
        .filter(|v| mask >> v & 1 == 1)
        .map(|v| instance.vertices[v].name.as_str())
        .collect();
    format!("{{{}}}", names.join(","))
}

fn inside(mask: u64, a: usize, b: usize) -> bool {
    mask >> a & 1 == 1 && mask >> b & 1 == 1
}

/// LP (9) plus one odd-set constraint per odd `S`, `|S| >= 3`.
pub fn build_edmonds_primal(instance: &GameInstance, vertex_cap: usize) -> Result<LinearProgram> {
    check_general(instance, "build_edmonds_primal", vertex_cap)?;
    let mut lp = build_primal(instance);
    for mask in odd_sets(instance.num_vertices()) {
        let terms: Vec<(usize, Rational)> = instance
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| inside(mask, e.a, e.b))
            .map(|(i, _)| (i, Rational::one()))
            .collect();
        lp.add_sparse_constraint(
            format!("odd{}", set_name(instance, mask)),
            &terms,
            Relation::Le,
            Rational::from((mask.count_ones() as u64 - 1) / 2),
        )?;
    }
    Ok(lp)
}

/// Dual of the odd-set LP: vertex variables plus one `z_S` per odd set,
/// with objective coefficient `(|S| - 1) / 2`.
pub fn build_edmonds_dual(instance: &GameInstance, vertex_cap: usize) -> Result<LinearProgram> {
    check_general(instance, "build_edmonds_dual", vertex_cap)?;
    let n = instance.num_vertices();
    let sets = odd_sets(n);
    let mut lp = LinearProgram::new(Sense::Minimize);
    for v in 0..n {
        lp.add_nonnegative(dual_vertex_name(instance, v), Rational::one())?;
    }
    for &mask in &sets {
        lp.add_nonnegative(
            format!("z{}", set_name(instance, mask)),
            Rational::from((mask.count_ones() as u64 - 1) / 2),
        )?;
    }
    for (e, edge) in instance.edges.iter().enumerate() {
        let mut terms = vec![(edge.a, Rational::one()), (edge.b, Rational::one())];
        for (k, &mask) in sets.iter().enumerate() {
            if inside(mask, edge.a, edge.b) {
                terms.push((n + k, Rational::one()));
            }
        }
        lp.add_sparse_constraint(
            format!("cover{}", instance.edge_label(e)),
            &terms,
            Relation::Ge,
            edge.weight.clone(),
        )?;
    }
    Ok(lp)
}

/// A dense matrix with labelled rows and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintMatrix {
    pub entries: Vec<Vec<Rational>>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl ConstraintMatrix {
    pub fn new(entries: Vec<Vec<Rational>>) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        assert!(entries.iter().all(|r| r.len() == cols), "ragged matrix");
        ConstraintMatrix {
            entries,
            row_labels: (0..rows).map(|i| format!("r{i}")).collect(),
            col_labels: (0..cols).map(|j| format!("c{j}")).collect(),
        }
    }

    pub fn from_integers(rows: &[&[i64]]) -> Self {
        ConstraintMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&a| Rational::from_integer(a)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn transpose(&self) -> ConstraintMatrix {
        let entries = (0..self.cols())
            .map(|j| self.entries.iter().map(|r| r[j].clone()).collect())
            .collect();
        ConstraintMatrix {
            entries,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        rank(self.entries.clone())
    }
}

impl fmt::Display for ConstraintMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, row) in self.row_labels.iter().zip(&self.entries) {
            let cells: Vec<String> = row.iter().map(|a| a.to_string()).collect();
            writeln!(f, "{label}: {}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Vertex-edge incidence matrix: one row per vertex, one column per edge.
pub fn incidence_matrix(instance: &GameInstance) -> ConstraintMatrix {
    let entries = (0..instance.num_vertices())
        .map(|v| {
            instance
                .edges
                .iter()
                .map(|e| {
                    if e.touches(v) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    ConstraintMatrix {
        entries,
        row_labels: instance.vertices.iter().map(|v| v.name.clone()).collect(),
        col_labels: (0..instance.num_edges())
            .map(|e| instance.edge_label(e))
            .collect(),
    }
}

/// Coefficient matrix of an LP's constraints.
pub fn constraint_matrix(lp: &LinearProgram) -> ConstraintMatrix {
    ConstraintMatrix {
        entries: lp
            .constraints()
            .iter()
            .map(|c| c.coefficients.clone())
            .collect(),
        row_labels: lp.constraints().iter().map(|c| c.name.clone()).collect(),
        col_labels: lp.variables().iter().map(|v| v.name.clone()).collect(),
    }
}

fn check_tum_cap(m: &ConstraintMatrix, cap: usize) -> Result<()> {
    let dim = m.rows().min(m.cols());
    if dim > cap {
        return Err(Error::CapExceeded {
            what: "TUM dimension",
            limit: cap,
            actual: dim,
        });
    }
    Ok(())
}

fn unit_entries(m: &ConstraintMatrix) -> Option<Vec<Vec<i8>>> {
    m.entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|a| {
                    if a.is_zero() {
                        Some(0)
                    } else if *a == Rational::one() {
                        Some(1)
                    } else if *a == -Rational::one() {
                        Some(-1)
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect()
}

/// True iff every square submatrix has determinant in {-1, 0, 1}.
///
/// Uses the Ghouila-Houri characterization on the smaller dimension: a
/// {0, ±1} matrix is totally unimodular iff every subset of its rows can be
/// signed so that the signed row sum lies in {-1, 0, 1} componentwise.
/// `cap` bounds `min(rows, cols)`.
pub fn is_totally_unimodular(m: &ConstraintMatrix, cap: usize) -> Result<bool> {
    check_tum_cap(m, cap)?;
    let Some(mut a) = unit_entries(m) else {
        return Ok(false);
    };
    if m.rows() > m.cols() {
        a = (0..m.cols())
            .map(|j| a.iter().map(|r| r[j]).collect())
            .collect();
    }
    let r = a.len();
    for subset in 1u64..1 << r {
        let rows: Vec<&[i8]> = (0..r)
            .filter(|i| subset >> i & 1 == 1)
            .map(|i| a[i].as_slice())
            .collect();
        if !signable(&rows) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the rows can be signed so that every column sum lies in
/// {-1, 0, 1}. Depth-first over signs, pruning a column once its partial
/// sum can no longer be brought back into range.
fn signable(rows: &[&[i8]]) -> bool {
    let c = rows.first().map_or(0, |r| r.len());
    // remaining[k][j] = nonzeros in column j among rows k..
    let mut remaining = vec![vec![0i32; c]; rows.len() + 1];
    for k in (0..rows.len()).rev() {
        for j in 0..c {
            remaining[k][j] = remaining[k + 1][j] + i32::from(rows[k][j] != 0);
        }
    }
    let mut sums = vec![0i32; c];
    dfs_sign(rows, &remaining, &mut sums, 0)
}

fn dfs_sign(rows: &[&[i8]], remaining: &[Vec<i32>], sums: &mut [i32], k: usize) -> bool {
    if k == rows.len() {
        return true;
    }
    // The first row's sign can be fixed by symmetry.
    let signs: &[i32] = if k == 0 { &[1] } else { &[1, -1] };
    for &sign in signs {
        for (s, &x) in sums.iter_mut().zip(rows[k]) {
            *s += sign * i32::from(x);
        }
        let ok = sums
            .iter()
            .zip(&remaining[k + 1])
            .all(|(s, rest)| s.abs() - rest <= 1);
        if ok && dfs_sign(rows, remaining, sums, k + 1) {
            return true;
        }
        for (s, &x) in sums.iter_mut().zip(rows[k]) {
            *s -= sign * i32::from(x);
        }
    }
    false
}

/// Exact determinant by fraction-preserving Gaussian elimination.
pub fn determinant(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det = &det * &pivot;
        for i in col + 1..n {
            if a[i][col].is_zero() {
                continue;
            }
            let f = &a[i][col] / &pivot;
            let (head, tail) = a.split_at_mut(i);
            for (x, y) in tail[0][col..].iter_mut().zip(&head[col][col..]) {
                *x -= &(&f * y);
            }
        }
    }
    det
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            if n - i < k - current.len() {
                break;
            }
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Direct determinant sweep over square submatrices, growing the size from
/// 1 upward and stopping at the first determinant outside {-1, 0, 1}.
pub fn minor_sweep(m: &ConstraintMatrix, cap: usize) -> Result<bool> {
    check_tum_cap(m, cap)?;
    for k in 1..=m.rows().min(m.cols()) {
        let row_sets = combinations(m.rows(), k);
        let col_sets = combinations(m.cols(), k);
        for rows in &row_sets {
            for cols in &col_sets {
                let sub = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| m.entries[i][j].clone()).collect())
                    .collect();
                if determinant(sub).abs() > Rational::one() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Decomposition of a half-integral fractional matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfIntegralityReport {
    /// Edges at value 1.
    pub integral_edges: Vec<usize>,
    /// Vertex sequences of the cycles formed by edges at value 1/2.
    pub odd_cycles: Vec<Vec<usize>>,
    pub violations: Vec<String>,
}

impl HalfIntegralityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.holds() && self.odd_cycles.is_empty()
    }
}

/// Checks that an optimal vertex of the fractional matching LP takes values
/// in {0, 1/2, 1}, that its 1-edges form a matching and that its 1/2-edges
/// split into vertex-disjoint odd cycles.
pub fn check_half_integrality(
    sol: &LpSolution,
    instance: &GameInstance,
) -> Result<HalfIntegralityReport> {
    if !matches!(
        instance.kind,
        GameKind::GeneralMatching | GameKind::Assignment
    ) {
        return Err(Error::WrongKind {
            operation: "check_half_integrality",
            kind: instance.kind,
        });
    }
    let primal = build_primal(instance);
    if !sol.is_optimal() || !primal.is_vertex(&sol.assignment) {
        return Err(Error::NotVertex);
    }
    let half = Rational::new(1, 2);
    let one = Rational::one();
    let mut violations = Vec::new();
    let mut integral_edges = Vec::new();
    let mut half_edges = Vec::new();
    for (e, x) in sol.assignment.iter().enumerate() {
        if *x == one {
            integral_edges.push(e);
        } else if *x == half {
            half_edges.push(e);
        } else if !x.is_zero() {
            violations.push(format!("edge {} has value {x}", instance.edge_label(e)));
        }
    }
    let n = instance.num_vertices();
    let mut one_degree = vec![0usize; n];
    for &e in &integral_edges {
        one_degree[instance.edges[e].a] += 1;
        one_degree[instance.edges[e].b] += 1;
    }
    for (v, &d) in one_degree.iter().enumerate() {
        if d > 1 {
            violations.push(format!(
                "value-1 edges meet twice at {}",
                instance.vertices[v].name
            ));
        }
    }
    let mut half_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &e in &half_edges {
        half_adj[instance.edges[e].a].push(instance.edges[e].b);
        half_adj[instance.edges[e].b].push(instance.edges[e].a);
    }
    let mut odd_cycles = Vec::new();
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] || half_adj[start].is_empty() {
            continue;
        }
        if half_adj[start].len() != 2 {
            violations.push(format!(
                "vertex {} has {} half edges",
                instance.vertices[start].name,
                half_adj[start].len()
            ));
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut prev = start;
        let mut cur = half_adj[start][0];
        let mut broken = false;
        while cur != start {
            if seen[cur] || half_adj[cur].len() != 2 {
                broken = true;
                break;
            }
            seen[cur] = true;
            cycle.push(cur);
            let next = if half_adj[cur][0] == prev {
                half_adj[cur][1]
            } else {
                half_adj[cur][0]
            };
            prev = cur;
            cur = next;
        }
        let names: Vec<&str> = cycle
            .iter()
            .map(|&v| instance.vertices[v].name.as_str())
            .collect();
        if broken {
            violations.push(format!("half edges through {} do not close a cycle", names.join(",")));
        } else if cycle.len() % 2 == 0 {
            violations.push(format!("even cycle {}", names.join(",")));
        } else {
            odd_cycles.push(cycle);
        }
    }
    let on_cycles: BTreeSet<usize> = odd_cycles.iter().flatten().copied().collect();
    for &e in &integral_edges {
        let edge = &instance.edges[e];
        if on_cycles.contains(&edge.a) || on_cycles.contains(&edge.b) {
            violations.push(format!(
                "value-1 edge {} touches a half cycle",
                instance.edge_label(e)
            ));
        }
    }
    Ok(HalfIntegralityReport {
        integral_edges,
        odd_cycles,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lp::{solve, LpStatus};
    use crate::oracle::{max_weight, Caps};
    use crate::rational::rat;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn optimum(lp: &LinearProgram) -> Rational {
        solve(lp).value.expect("optimal")
    }

    #[test]
    fn single_edge_assignment() {
        let g = fixtures::single_edge(GameKind::Assignment, r(5));
        let p = build_primal(&g);
        assert_eq!(p.num_variables(), 1);
        assert_eq!(p.constraints().len(), 2);
        assert_eq!(optimum(&p), r(5));
        let d = solve(&build_dual(&g));
        assert_eq!(d.value, Some(r(5)));
        assert!(d.assignment == vec![r(5), r(0)] || d.assignment == vec![r(0), r(5)]);
    }

    #[test]
    fn star_b221_primal_and_dual() {
        let g = fixtures::star_b221();
        assert_eq!(optimum(&build_primal(&g)), r(4));
        let d = solve(&build_dual(&g));
        assert_eq!(d.value, Some(r(4)));
        assert_eq!(d.assignment, vec![r(1), r(0), r(2)]);
    }

    #[test]
    fn hk_star_admits_second_optimal_dual() {
        let g = fixtures::star_hk_423();
        let dual = build_dual(&g);
        assert_eq!(optimum(&dual), r(10));
        // (u, v1, v2) = (1, 0, 2), all edge duals zero.
        let mut x = vec![r(1), r(0), r(2)];
        x.resize(dual.num_variables(), r(0));
        assert!(dual.is_feasible(&x));
        assert_eq!(dual.objective_value(&x), r(10));
    }

    #[test]
    fn hk_dual_omits_z_without_upper_bound() {
        let g = fixtures::star_hk_lower();
        let dual = build_dual(&g);
        assert_eq!(dual.num_variables(), 3 + 2);
        assert!(dual.variable_index("z(u,v1)").is_err());
        let g = fixtures::star_hk_upper();
        assert_eq!(build_dual(&g).num_variables(), 3 + 2 + 2);
    }

    #[test]
    fn k3_fractional_and_edmonds() {
        let k3 = fixtures::k3();
        let s = solve(&build_primal(&k3));
        assert_eq!(s.value, Some(rat(3, 2)));
        assert_eq!(s.assignment, vec![rat(1, 2); 3]);
        let edmonds = build_edmonds_primal(&k3, 12).unwrap();
        assert_eq!(optimum(&edmonds), r(1));
        assert_eq!(optimum(&build_edmonds_dual(&k3, 12).unwrap()), r(1));
    }

    #[test]
    fn edmonds_matches_oracle_on_triangle_pendant_and_seven_vertex() {
        for g in [fixtures::triangle_pendant(), fixtures::seven_vertex()] {
            let w = max_weight(&g, &Caps::default()).unwrap().0;
            assert_eq!(optimum(&build_edmonds_primal(&g, 12).unwrap()), w);
        }
        assert_eq!(optimum(&build_edmonds_primal(&fixtures::triangle_pendant(), 12).unwrap()), r(2));
    }

    #[test]
    fn edmonds_equals_fractional_on_bipartite_general_graph() {
        // A 4-cycle written as a general graph.
        let mut g = GameInstance::new(GameKind::GeneralMatching);
        let v: Vec<usize> = (1..=4)
            .map(|i| g.add_vertex(format!("v{i}"), Side::Single))
            .collect();
        for (i, w) in [(0, 2), (1, 3), (2, 4), (3, 1)] {
            g.add_edge(v[i], v[(i + 1) % 4], r(w));
        }
        assert_eq!(
            optimum(&build_edmonds_primal(&g, 12).unwrap()),
            optimum(&build_primal(&g))
        );
    }

    #[test]
    fn edmonds_refuses_bipartite_kind_and_large_graphs() {
        assert!(matches!(
            build_edmonds_primal(&fixtures::star_assignment(), 12),
            Err(Error::WrongKind { .. })
        ));
        assert!(matches!(
            build_edmonds_primal(&fixtures::seven_vertex(), 6),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn tum_examples() {
        let id = ConstraintMatrix::from_integers(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(is_totally_unimodular(&id, 8).unwrap());
        let k3 = incidence_matrix(&fixtures::k3());
        assert!(!is_totally_unimodular(&k3, 8).unwrap());
        assert_eq!(determinant(k3.entries.clone()).abs(), r(2));
        for g in [fixtures::star_assignment(), fixtures::star_hk_423()] {
            assert!(is_totally_unimodular(&incidence_matrix(&g), 8).unwrap());
        }
        let two = ConstraintMatrix::from_integers(&[&[2]]);
        assert!(!is_totally_unimodular(&two, 8).unwrap());
        assert!(!minor_sweep(&two, 8).unwrap());
    }

    #[test]
    fn tum_cap_is_enforced() {
        let big = ConstraintMatrix::new(vec![vec![r(0); 9]; 9]);
        assert!(matches!(
            is_totally_unimodular(&big, 8),
            Err(Error::CapExceeded { .. })
        ));
        assert!(is_totally_unimodular(&big, 9).unwrap());
    }

    #[test]
    fn hk_constraint_matrix_is_tum() {
        let lp = build_primal(&fixtures::star_hk_423());
        assert!(is_totally_unimodular(&constraint_matrix(&lp), 8).unwrap());
    }

    #[test]
    fn half_integrality_on_k3_and_seven_vertex() {
        let k3 = fixtures::k3();
        let s = solve(&build_primal(&k3));
        let report = check_half_integrality(&s, &k3).unwrap();
        assert!(report.holds());
        assert_eq!(report.odd_cycles.len(), 1);
        assert_eq!(report.odd_cycles[0].len(), 3);

        let g = fixtures::seven_vertex();
        let s = solve(&build_primal(&g));
        assert_eq!(s.value, Some(r(4)));
        assert!(check_half_integrality(&s, &g).unwrap().holds());

        // The half-integral seven-cycle is itself an optimal vertex.
        let cycle = ["v1", "v2", "v7", "v3", "v4", "v5", "v6"];
        let mut x = vec![r(0); g.num_edges()];
        for i in 0..7 {
            x[g.edge_by_names(cycle[i], cycle[(i + 1) % 7]).unwrap()] = rat(1, 2);
        }
        let seven = LpSolution {
            status: LpStatus::Optimal,
            value: Some(r(4)),
            assignment: x,
            basis: Default::default(),
        };
        let report = check_half_integrality(&seven, &g).unwrap();
        assert!(report.holds());
        assert_eq!(report.odd_cycles[0].len(), 7);
    }

    #[test]
    fn half_integrality_rejects_non_vertex() {
        let g = fixtures::single_edge(GameKind::GeneralMatching, r(1));
        let sol = LpSolution {
            status: LpStatus::Optimal,
            value: Some(rat(1, 2)),
            assignment: vec![rat(1, 2)],
            basis: Default::default(),
        };
        assert_eq!(check_half_integrality(&sol, &g).unwrap_err(), Error::NotVertex);
    }

    #[test]
    fn bipartite_assignment_vertices_are_integral() {
        let g = fixtures::star_assignment();
        let s = solve(&build_primal(&g));
        assert!(check_half_integrality(&s, &g).unwrap().is_integral());
    }

    #[test]
    fn incidence_rows_are_zero_one() {
        for f in fixtures::all() {
            let lp = build_primal(&f.instance);
            let m = constraint_matrix(&lp);
            for row in m.entries.iter().take(f.instance.num_vertices()) {
                assert!(row.iter().all(|a| a.is_zero() || *a == Rational::one()));
            }
        }
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(0i64..=1, c), r)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn ghouila_houri_agrees_with_minor_sweep(rows in arb_matrix()) {
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            let m = ConstraintMatrix::from_integers(&refs);
            prop_assert_eq!(is_totally_unimodular(&m, 8).unwrap(), minor_sweep(&m, 8).unwrap());
        }

        #[test]
        fn signed_matrices_agree_too(rows in arb_matrix(), flips in proptest::collection::vec(any::<bool>(), 25)) {
            let signed: Vec<Vec<i64>> = rows.iter().enumerate().map(|(i, r)| {
                r.iter().enumerate().map(|(j, &a)| if flips[(i * 5 + j) % 25] { -a } else { a }).collect()
            }).collect();
            let refs: Vec<&[i64]> = signed.iter().map(Vec::as_slice).collect();
            let m = ConstraintMatrix::from_integers(&refs);
            prop_assert_eq!(is_totally_unimodular(&m, 8).unwrap(), minor_sweep(&m, 8).unwrap());
        }
    }
}
