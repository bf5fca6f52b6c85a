"""Canonical deformation recursions, obstruction ranks, and jump invariants.

Each theory deforms a harmonic form by a Green-operator fixed-point recursion.
The recursion operator strictly raises parameter degree, so the series is the
unique fixed point over the truncated ring; termination is detected and then
certified by an exact plug-back of the full series into the equation.

Obstruction bookkeeping is done twice on purpose: once through polynomial
rank matrices built from the series, once through kernel dimensions of the
evaluated deformed operators.  The two must agree at every evaluation point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .errors import InternalInconsistencyError
from .scalars import parse_gaussian

THEORY_LABEL = {"dolbeault": "Dolbeault", "bc": "Bott-Chern", "aeppli": "Aeppli"}


@dataclass
class DeformationSeries:
    theory: str
    bidegree: tuple
    sigma0: object  # FormVector with constant coefficients
    pieces: list  # coordinate vectors of ParamPoly, index = parameter degree
    terminated: bool
    termination_order: int
    fixed_point_certified: bool

    def coords(self):
        total = list(self.pieces[0])
        for piece in self.pieces[1:]:
            total = [a + b for a, b in zip(total, piece)]
        return total

    def piece_forms(self, pres):
        return [pres.from_coords(self.bidegree, piece) for piece in self.pieces]


@dataclass
class ObstructionSpace:
    theory: str
    bidegree: tuple
    series: list
    rank_matrix: list  # rows of ParamPoly, columns indexed by the harmonic basis
    identically_zero: bool = field(init=False)

    def __post_init__(self):
        self.identically_zero = all(not x for row in self.rank_matrix for x in row)

    def rank_at(self, point):
        evaluated = [[x.eval(point) for x in row] for row in self.rank_matrix]
        return linalg.rank(evaluated)

    def solved_subspace_dim_at(self, point):
        return len(self.series) - self.rank_at(point)

    def zero_columns(self):
        """Harmonic basis classes whose canonical series is unobstructed on all of B."""
        cols = len(self.series)
        return [
            l
            for l in range(cols)
            if all(not row[l] for row in self.rank_matrix)
        ]


class Deformer:
    def __init__(self, pres, pkg, fam):
        self.pres = pres
        self.pkg = pkg
        self.fam = fam
        self.ring = fam.ring
        self._cache = {}

    # ----- recursion building blocks ------------------------------------------

    def _zero_vec(self, dim):
        z = self.ring.zero()
        return [z] * dim

    def _lift_vec(self, coords):
        return [self.ring.const(c) for c in coords]

    def _recursion_feedback(self, theory, p, q):
        """Constant matrix R with sigma_k = R · (degree-k part of the source term)."""
        key = ("R", theory, p, q)
        if key in self._cache:
            return self._cache[key]
        pkg = self.pkg
        dims = self.pres.dim
        if theory == "aeppli":
            R = linalg.mat_mul_sized(
                pkg.green("aeppli", p, q),
                pkg.mat("ddbar_star", p + 1, q + 1),
                dims(p, q),
                dims(p, q),
                dims(p + 1, q + 1),
            )
        elif theory == "bc":
            inner = pkg.mat("dbar_star", p, q + 1)
            chain = linalg.mat_mul_sized(
                pkg.mat("partial", p - 1, q + 1),
                pkg.mat("partial_star", p, q + 1),
                dims(p, q + 1),
                dims(p - 1, q + 1),
                dims(p, q + 1),
            )
            chain = linalg.mat_mul_sized(
                pkg.mat("dbar_star", p, q + 1), chain, dims(p, q), dims(p, q + 1), dims(p, q + 1)
            )
            total = linalg.mat_add(chain, inner)
            R = linalg.mat_neg(
                linalg.mat_mul_sized(
                    pkg.green("bc", p, q), total, dims(p, q), dims(p, q), dims(p, q + 1)
                )
            )
        elif theory == "dolbeault":
            R = linalg.mat_mul_sized(
                pkg.mat("dbar_star", p, q + 1),
                pkg.green("dolbeault", p, q + 1),
                dims(p, q),
                dims(p, q + 1),
                dims(p, q + 1),
            )
        else:
            raise KeyError("unknown theory %r" % theory)
        self._cache[key] = R
        return R

    def _step_matrix(self, theory, p, q, order):
        """Degree-`order` ParamPoly matrix feeding the recursion source term."""
        key = ("S", theory, p, q, order)
        if key in self._cache:
            return self._cache[key]
        fam = self.fam
        dims = self.pres.dim
        if theory == "aeppli":
            inner = fam._mm(
                fam.i_phi(p + 1, q, order), fam.partial_poly(p, q), dims(p, q + 1), dims(p + 1, q), dims(p, q)
            )
            step = fam._mm(
                fam.partial_poly(p, q + 1), inner, dims(p + 1, q + 1), dims(p, q + 1), dims(p, q)
            )
        elif theory == "bc":
            step = fam._mm(
                fam.partial_poly(p - 1, q + 1),
                fam.i_phi(p, q, order),
                dims(p, q + 1),
                dims(p - 1, q + 1),
                dims(p, q),
            )
        elif theory == "dolbeault":
            step = fam.lie(p, q, order)
        else:
            raise KeyError("unknown theory %r" % theory)
        self._cache[key] = step
        return step

    def _poly_mm(self, const_mat, poly_vec, rows):
        z = self.ring.zero()
        out = [z] * rows
        for i, row in enumerate(const_mat):
            s = z
            for c, x in zip(row, poly_vec):
                if c and x:
                    s = s + c * x
            out[i] = s
        return out

    # ----- canonical series -----------------------------------------------------

    def harmonic_precheck(self, theory, coords, p, q):
        box = self.pkg.laplacian(theory, p, q)
        if any(x for x in linalg.mat_vec(box, coords)):
            raise ValueError(
                "seed form is not %s-harmonic at (%d,%d)" % (THEORY_LABEL[theory], p, q)
            )

    def canonical_series(self, theory, sigma0, p, q, check_harmonic=True):
        """Run the fixed-point recursion for a harmonic seed form."""
        coords0 = self.pres.to_coords(sigma0) if hasattr(sigma0, "terms") else list(sigma0)
        if check_harmonic:
            self.harmonic_precheck(theory, coords0, p, q)
        dim = self.pres.dim(p, q)
        maxdeg = max(self.fam.max_degree, 1)
        R = self._recursion_feedback(theory, p, q)
        steps = {
            j: self._step_matrix(theory, p, q, j)
            for j in range(1, maxdeg + 1)
        }
        mid_dim = len(steps[1]) if steps[1] else 0
        pieces = [self._lift_vec(coords0)]
        order = self.ring.order
        terminated = False
        for k in range(1, order + 1):
            z = self.ring.zero()
            source = [z] * mid_dim
            for j in range(1, min(k, maxdeg) + 1):
                contrib = linalg.mat_vec(steps[j], pieces[k - j], zero=z)
                source = [a + b for a, b in zip(source, contrib)]
            piece = self._poly_mm(R, source, dim)
            pieces.append(piece)
            # once maxdeg consecutive pieces vanish, all later ones do too
            if k >= maxdeg and all(
                not x for piece_k in pieces[-maxdeg:] for x in piece_k
            ):
                pieces = pieces[: k - maxdeg + 1]
                terminated = True
                break
        termination_order = max(
            (k for k, piece in enumerate(pieces) if any(piece)), default=0
        )
        certified = False
        if terminated and termination_order + maxdeg <= order:
            certified = self._certify_fixed_point(theory, pieces, coords0, steps, R, dim, mid_dim)
        return DeformationSeries(
            theory=theory,
            bidegree=(p, q),
            sigma0=self.pres.from_coords((p, q), coords0),
            pieces=pieces,
            terminated=terminated,
            termination_order=termination_order,
            fixed_point_certified=certified,
        )

    def _certify_fixed_point(self, theory, pieces, coords0, steps, R, dim, mid_dim):
        """Exact plug-back: sigma == sigma0 + R·(source applied to the full sigma)."""
        z = self.ring.zero()
        total = [z] * dim
        for piece in pieces:
            total = [a + b for a, b in zip(total, piece)]
        source = [z] * mid_dim
        for step in steps.values():
            contrib = linalg.mat_vec(step, total, zero=z)
            source = [a + b for a, b in zip(source, contrib)]
        rhs = self._poly_mm(R, source, dim)
        rhs = [a + b for a, b in zip(self._lift_vec(coords0), rhs)]
        return all(a == b for a, b in zip(total, rhs))

    def series_for_basis(self, theory, p, q):
        key = ("basis_series", theory, p, q)
        if key not in self._cache:
            self._cache[key] = [
                self.canonical_series(theory, v, p, q, check_harmonic=False)
                for v in self.pkg.harmonic_vectors(theory, p, q)
            ]
        return self._cache[key]

    # ----- obstruction polynomials -----------------------------------------------

    def aeppli_obstruction_source(self, series):
        """∂ i_φ ∂ σ(t) as a ParamPoly coordinate vector in A^{p+1,q+1}."""
        p, q = series.bidegree
        fam = self.fam
        dims = self.pres.dim
        coords = series.coords()
        v = linalg.mat_vec(fam.partial_poly(p, q), coords, zero=self.ring.zero())
        v = linalg.mat_vec(fam.i_phi(p + 1, q), v, zero=self.ring.zero())
        v = linalg.mat_vec(fam.partial_poly(p, q + 1), v, zero=self.ring.zero())
        return v

    def obstruction_coords(self, series):
        """The deformed-closedness defect of the series, as ParamPoly coordinates."""
        p, q = series.bidegree
        fam = self.fam
        z = self.ring.zero()
        coords = series.coords()
        if series.theory == "aeppli":
            return linalg.mat_vec(fam.ddbar_phi(p, q), coords, zero=z)
        if series.theory == "bc":
            top = linalg.mat_vec(fam.partial_poly(p, q), coords, zero=z)
            bottom = linalg.mat_vec(fam.dbar_phi(p, q), coords, zero=z)
            return top + bottom
        if series.theory == "dolbeault":
            return linalg.mat_vec(fam.dbar_phi(p, q), coords, zero=z)
        raise KeyError(series.theory)

    def rank_matrix(self, theory, p, q):
        """Obstruction rank matrix; corank at a point is the surviving subspace dim."""
        key = ("rank", theory, p, q)
        if key in self._cache:
            return self._cache[key]
        series = self.series_for_basis(theory, p, q)
        rows = []
        if theory == "aeppli":
            targets = self.pkg.harmonic_vectors("bc", p + 1, q + 1)
            grams = self.pkg.gram(p + 1, q + 1)
            sources = [self.aeppli_obstruction_source(s) for s in series]
            for e in targets:
                row = []
                for src in sources:
                    val = self.ring.zero()
                    for x, y, g in zip(src, e, grams):
                        if x and y:
                            val = val + x * (y.conjugate() * g)
                    row.append(val)
                rows.append(row)
        else:
            obst = [self.obstruction_coords(s) for s in series]
            if obst:
                for i in range(len(obst[0])):
                    rows.append([o[i] for o in obst])
        space = ObstructionSpace(theory=theory, bidegree=(p, q), series=series, rank_matrix=rows)
        self._cache[key] = space
        return space

    # ----- jump invariants ----------------------------------------------------------

    def point_ops(self, point):
        parsed = {k: parse_gaussian(v) for k, v in point.items()}
        key = ("pt", tuple(sorted((k, str(v)) for k, v in parsed.items())))
        if key not in self._cache:
            self._cache[key] = self.fam.at_point(self.pkg, parsed)
        return self._cache[key]

    def defect_kernel_dim(self, theory, point, p, q):
        """dim of the t-deformed kernel cut out inside the undeformed harmonic gauge."""
        po = self.point_ops(point)
        pkg = self.pkg
        dim = self.pres.dim(p, q)
        if theory == "bc":
            stacked = po.d_phi_stack(p, q) + pkg.mat("ddbar_star", p, q)
        elif theory == "aeppli":
            stacked = (
                po.mat("ddbar_phi", p, q)
                + pkg.mat("partial_star", p, q)
                + pkg.mat("dbar_star", p, q)
            )
        elif theory == "dolbeault":
            stacked = po.mat("dbar_phi", p, q) + pkg.mat("dbar_star", p, q)
        else:
            raise KeyError(theory)
        return len(linalg.nullspace(stacked, cols=dim))

    def defect(self, theory, point, p, q):
        """h_theory − dim(deformed kernel ∩ undeformed gauge), two ways, asserted equal."""
        n = self.pres.n
        if p < 0 or q < 0 or p > n or q > n:
            return 0
        h = len(self.pkg.harmonic_vectors(theory, p, q))
        via_kernel = h - self.defect_kernel_dim(theory, point, p, q)
        via_rank = self.rank_matrix(theory, p, q).rank_at(point)
        if via_kernel != via_rank:
            raise InternalInconsistencyError(
                "%s defect disagrees at (%d,%d): rank %d vs kernel %d"
                % (THEORY_LABEL[theory], p, q, via_rank, via_kernel)
            )
        return via_rank

    def jump_invariants(self, point):
        """(v, w) per bidegree: Bott-Chern and Aeppli deformation defects."""
        out = {}
        for p, q in self.pres.bidegrees():
            out[(p, q)] = (
                self.defect("bc", point, p, q),
                self.defect("aeppli", point, p, q),
            )
        return out

    # ----- full deformations of non-harmonic seeds -----------------------------------

    def full_deformation(self, theory, y, point=None):
        """Canonical deformation of any admissible closed form: σ^h(t) plus exact tail.

        Returns (series of the harmonic part, tail ParamPoly coordinate vector).
        """
        p, q = y.bidegree
        pkg = self.pkg
        pres = self.pres
        dims = pres.dim
        coords = pres.to_coords(y)
        if theory == "aeppli":
            kernel_mat = pkg.mat("ddbar", p, q)
        elif theory == "bc":
            kernel_mat = pkg.d_stack(p, q)
        else:
            kernel_mat = pkg.mat("dbar", p, q)
        if any(x for x in linalg.mat_vec(kernel_mat, coords)):
            raise ValueError("seed form is not closed for theory %r" % theory)
        H = pkg.harmonic_projector(theory, p, q)
        h_coords = linalg.mat_vec(H, coords)
        rhs = [a - b for a, b in zip(coords, h_coords)]
        z = self.ring.zero()
        if theory == "aeppli":
            pm = pkg.mat("partial", p - 1, q)
            bm = pkg.mat("dbar", p, q - 1)
            stacked = [row_p + row_b for row_p, row_b in zip(pm, bm)] if dims(p, q) else []
            sol = linalg.solve(stacked, rhs)
            if sol is None:
                raise InternalInconsistencyError("Hodge decomposition solve failed (aeppli)")
            v_part = sol[: dims(p - 1, q)]
            u_part = sol[dims(p - 1, q) :]
            tail = self._lift_vec(linalg.mat_vec(pm, v_part))
            du = linalg.mat_vec(self.fam.dbar_phi(p, q - 1), self._lift_vec(u_part), zero=z)
            tail = [a + b for a, b in zip(tail, du)]
        elif theory == "bc":
            sol = linalg.solve(pkg.mat("ddbar", p - 1, q - 1), rhs)
            if sol is None:
                raise InternalInconsistencyError("Hodge decomposition solve failed (bc)")
            tail = linalg.mat_vec(self.fam.ddbar_phi(p - 1, q - 1), self._lift_vec(sol), zero=z)
        else:
            sol = linalg.solve(pkg.mat("dbar", p, q - 1), rhs)
            if sol is None:
                raise InternalInconsistencyError("Hodge decomposition solve failed (dolbeault)")
            tail = linalg.mat_vec(self.fam.dbar_phi(p, q - 1), self._lift_vec(sol), zero=z)
        series = self.canonical_series(theory, h_coords, p, q, check_harmonic=False)
        return series, tail

    def deformed_exactness_gap(self, theory, series, tail, point):
        """Closedness defect of σ^h(t)+tail at a point (must vanish iff deformable)."""
        p, q = series.bidegree
        po = self.point_ops(point)
        total = [a + b for a, b in zip(series.coords(), tail)]
        value = [x.eval(point) for x in total]
        if theory == "aeppli":
            return linalg.mat_vec(po.mat("ddbar_phi", p, q), value)
        if theory == "bc":
            return linalg.mat_vec(po.d_phi_stack(p, q), value)
        return linalg.mat_vec(po.mat("dbar_phi", p, q), value)

    # ----- per-series point criteria ---------------------------------------------------

    def harmonicity_criterion(self, series, point):
        """(deformed-closed?, BC-harmonic-projection-vanishes?) at the point."""
        if series.theory != "aeppli":
            raise ValueError("harmonicity criterion applies to Aeppli series")
        p, q = series.bidegree
        obst = [x.eval(point) for x in self.obstruction_coords(series)]
        lhs_zero = not any(obst)
        src = [x.eval(point) for x in self.aeppli_obstruction_source(series)]
        proj = linalg.mat_vec(self.pkg.harmonic_projector("bc", p + 1, q + 1), src)
        rhs_zero = not any(proj)
        return lhs_zero, rhs_zero

    def aeppli_source_d_closed(self, series):
        """∂ i_φ ∂ σ(t) ∈ ker d, identically in the parameters."""
        p, q = series.bidegree
        src = self.aeppli_obstruction_source(series)
        z = self.ring.zero()
        top = linalg.mat_vec(self.fam.partial_poly(p + 1, q + 1), src, zero=z)
        bottom = linalg.mat_vec(self.fam.dbar_poly(p + 1, q + 1), src, zero=z)
        return not any(top) and not any(bottom)

    # ----- weak ddbar-lemma predicates ---------------------------------------------------

    def weak_ddbar_predicates(self, a, b):
        """(∂ of ker∂∂̄ lands in ∂̄(ker ∂),  ∂ of ker∂∂̄ lands in im ∂∂̄), at (a,b)."""
        pkg = self.pkg
        dims = self.pres.dim
        n = self.pres.n
        if not (0 <= a <= n and 0 <= b <= n):
            return True, True
        K = linalg.nullspace(pkg.mat("ddbar", a, b), cols=dims(a, b))
        images = [linalg.mat_vec(pkg.mat("partial", a, b), k) for k in K]
        images = [v for v in images if any(v)]
        dim_t = dims(a + 1, b)
        K2 = linalg.nullspace(pkg.mat("partial", a + 1, b - 1), cols=dims(a + 1, b - 1))
        target1 = [linalg.mat_vec(pkg.mat("dbar", a + 1, b - 1), k) for k in K2]
        pred1 = all(linalg.in_span(v, target1, dim_t) for v in images)
        target2 = linalg.columns(pkg.mat("ddbar", a, b - 1))
        pred2 = all(linalg.in_span(v, target2, dim_t) for v in images)
        return pred1, pred2

    # ----- verdicts -----------------------------------------------------------------------

    def unobstructedness_report(self, theory, p, q, points=()):
        """Per-class and per-bidegree verdicts, with the implication cross-checked."""
        space = self.rank_matrix(theory, p, q)
        classes = []
        for l, series in enumerate(space.series):
            col_zero = all(not row[l] for row in space.rank_matrix)
            failing = [
                pt
                for pt in points
                if any(row[l].eval(pt) for row in space.rank_matrix)
            ]
            classes.append(
                {
                    "index": l,
                    "terminated": series.terminated,
                    "certified": series.fixed_point_certified,
                    "termination_order": series.termination_order,
                    "unobstructed_on_B": col_zero,
                    "failing_points": failing,
                }
            )
        verdict = space.identically_zero
        if theory == "bc":
            pred, _ = self.weak_ddbar_predicates(p - 1, q + 1)
            implied = pred
        elif theory == "aeppli":
            _, pred = self.weak_ddbar_predicates(p, q + 1)
            implied = pred
        else:
            implied = False
        if implied and not verdict:
            raise InternalInconsistencyError(
                "weak ddbar-lemma predicts unobstructedness for %s at (%d,%d) "
                "but the rank matrix is nonzero" % (THEORY_LABEL[theory], p, q)
            )
        return {
            "theory": theory,
            "bidegree": (p, q),
            "canonically_unobstructed": verdict,
            "implied_by_weak_ddbar": implied,
            "classes": classes,
        }

    # ----- additional exactness statements at points ---------------------------------------

    def vanishing_intersections_check(self, point):
        """Three pairwise-zero intersections of deformed/undeformed pieces, all bidegrees."""
        po = self.point_ops(point)
        pkg = self.pkg
        dims = self.pres.dim
        for p, q in self.pres.bidegrees():
            dim = dims(p, q)
            k1 = linalg.nullspace(po.mat("ddbar_phi", p, q), cols=dim)
            im1 = linalg.columns(pkg.mat("ddbar_star", p + 1, q + 1))
            if linalg.intersect_spans(k1, im1, dim):
                raise InternalInconsistencyError(
                    "ker ∂∂̄_φ ∩ im (∂∂̄)* != 0 at (%d,%d)" % (p, q)
                )
            k2 = linalg.nullspace(po.d_phi_stack(p, q), cols=dim)
            im2 = pkg.dstar_image_vectors(p, q)
            if linalg.intersect_spans(k2, im2, dim):
                raise InternalInconsistencyError(
                    "ker d_φ ∩ im d* != 0 at (%d,%d)" % (p, q)
                )
            im_d = linalg.columns(pkg.mat("partial", p - 1, q)) + linalg.columns(
                pkg.mat("dbar", p, q - 1)
            )
            im3 = linalg.columns(po.mat("ddbar_phi_star", p + 1, q + 1))
            if linalg.intersect_spans(im_d, im3, dim):
                raise InternalInconsistencyError(
                    "im d ∩ im (∂∂̄_φ)* != 0 at (%d,%d)" % (p, q)
                )
        return True

    def harmonic_dimension_split_check(self, point):
        """dim harmonic Aeppli = gauge-kernel dim + deformed-image dim, per bidegree."""
        po = self.point_ops(point)
        pkg = self.pkg
        dims = self.pres.dim
        for p, q in self.pres.bidegrees():
            lhs = len(pkg.harmonic_vectors("aeppli", p, q))
            stacked = (
                pkg.mat("partial_star", p, q)
                + pkg.mat("dbar_star", p, q)
                + po.mat("ddbar_phi", p, q)
            )
            first = len(linalg.nullspace(stacked, cols=dims(p, q)))
            im_cols = linalg.columns(po.mat("ddbar_phi", p, q))
            ker_next = linalg.nullspace(
                pkg.mat("ddbar_star", p + 1, q + 1), cols=dims(p + 1, q + 1)
            )
            second = len(
                linalg.intersect_spans(im_cols, ker_next, dims(p + 1, q + 1))
            )
            if lhs != first + second:
                raise InternalInconsistencyError(
                    "harmonic dimension split fails at (%d,%d): %d != %d + %d"
                    % (p, q, lhs, first, second)
                )
        return True

    def equivalence_check(self, theory, y, exact_shift, point):
        """Canonical deformations of cohomologous seeds differ by a deformed-exact form."""
        pres = self.pres
        p, q = y.bidegree
        po = self.point_ops(point)
        dims = pres.dim
        series1, tail1 = self.full_deformation(theory, y)
        y2 = y + exact_shift
        series2, tail2 = self.full_deformation(theory, y2)
        total1 = [a + b for a, b in zip(series1.coords(), tail1)]
        total2 = [a + b for a, b in zip(series2.coords(), tail2)]
        diff = [(a - b).eval(point) for a, b in zip(total1, total2)]
        if theory == "aeppli":
            span = linalg.columns(self.pkg.mat("partial", p - 1, q)) + linalg.columns(
                po.mat("dbar_phi", p, q - 1)
            )
        elif theory == "bc":
            span = linalg.columns(po.mat("ddbar_phi", p - 1, q - 1))
        else:
            span = linalg.columns(po.mat("dbar_phi", p, q - 1))
        return linalg.in_span(diff, span, dims(p, q))
