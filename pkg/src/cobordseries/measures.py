"""Heat-kernel convolution semigroups and configuration measures on complexes.

The density of a configuration C on a saturated complex K with domains
(A_1, ..., A_k) is the product over domains of q_{|A_i|} evaluated on the
ordered boundary product phi_{A_i}(C): each domain reads its boundary word
off the complex (in complex order, with orientation exponents) and feeds
the resulting group element to the heat density at time |A_i| = the cell
count of the domain.  Everything downstream — the Markov property, the
reordering (non-)invariance, and the cutting/pasting factorization — is
checked by exhaustive summation over the finite configuration space G^K.
"""

from __future__ import annotations

import math
from itertools import product as iter_product

import numpy as np
from scipy.linalg import expm

from .cells import (
    Cell, CellComplex, boundary_word, box_contains, box_dim, box_intersect,
    box_volume, covered_volume, domain_box, is_regular, is_saturated,
    splits, INITIAL, FINAL, _meets_interior,
)
from .groups import (
    COUNTING, FiniteGroup, GroupFunction, convolve, delta, is_class_function,
)
from .series import FormalSeries


# ---------------------------------------------------------------------------
# convolution semigroups
# ---------------------------------------------------------------------------

def default_generators(group: FiniteGroup):
    """All transpositions for S3, every non-identity element otherwise."""
    if group.name == "S3":
        return (1, 2, 3)
    return tuple(g for g in group.elements() if g != group.identity)


class SemigroupDensity:
    """Heat family q_t = exp(t L) delta_e on a finite group.

    The generator averages left steps over a symmetric, conjugation-closed
    generating set S: (L f)(x) = (1/|S|) sum_{s in S} f(x s) - f(x).
    Densities are probability mass functions (counting normalization), so
    q_0 is the indicator of the identity and q_t * q_s = q_{t+s} under
    counting convolution.
    """

    def __init__(self, group: FiniteGroup, generators=None):
        self.group = group
        if generators is None:
            generators = default_generators(group)
        s = tuple(sorted(set(int(g) for g in generators)))
        if not s or group.identity in s:
            raise ValueError("generator set must be non-empty and avoid the identity")
        if any(group.inv(g) not in s for g in s):
            raise ValueError("generator set must be symmetric")
        for g in s:
            for h in group.elements():
                if group.mul(group.mul(h, g), group.inv(h)) not in s:
                    raise ValueError("generator set must be conjugation-closed")
        closure = {group.identity}
        frontier = [group.identity]
        while frontier:
            x = frontier.pop()
            for g in s:
                y = group.mul(x, g)
                if y not in closure:
                    closure.add(y)
                    frontier.append(y)
        if len(closure) != group.order:
            raise ValueError("generator set must generate the group")
        self.generators = s
        n = group.order
        gen = np.zeros((n, n))
        for x in group.elements():
            gen[x, x] -= 1.0
            for g in s:
                gen[x, group.mul(x, g)] += 1.0 / len(s)
        self._generator_matrix = gen
        self._cache: dict[float, GroupFunction] = {}

    def q(self, t) -> GroupFunction:
        """Density at time t >= 0 (counting-normalized pmf)."""
        t = float(t)
        if t < 0:
            raise ValueError("time must be >= 0")
        if t not in self._cache:
            if t == 0.0:
                values = tuple(1.0 if x == self.group.identity else 0.0
                               for x in self.group.elements())
            else:
                col = expm(t * self._generator_matrix)[:, self.group.identity]
                values = tuple(float(v) for v in col)
            self._cache[t] = GroupFunction(self.group, values, COUNTING)
        return self._cache[t]

    def __call__(self, t) -> GroupFunction:
        return self.q(t)


def heat_semigroup(group: FiniteGroup, generators=None, t=1.0) -> GroupFunction:
    return SemigroupDensity(group, generators).q(t)


def semigroup_axiom_residuals(density: SemigroupDensity, times) -> dict:
    """Worst deviations from the four semigroup axioms over the given times."""
    group = density.group
    unit = delta(group, normalization=COUNTING)
    res = {"unit": max(abs(a - b) for a, b in zip(density.q(0).values, unit.values))}
    conv_err = 0.0
    central_err = 0.0
    mass_err = 0.0
    positivity_err = 0.0
    for t in times:
        qt = density.q(t)
        mass_err = max(mass_err, abs(sum(qt.values) - 1.0))
        positivity_err = max(positivity_err, max(0.0, -min(qt.values)))
        for cls in group.conjugacy_classes():
            vals = [qt.values[x] for x in cls]
            central_err = max(central_err, max(vals) - min(vals))
        for s in times:
            lhs = convolve(qt, density.q(s))
            rhs = density.q(t + s)
            conv_err = max(conv_err, max(abs(a - b)
                                         for a, b in zip(lhs.values, rhs.values)))
    # weak continuity at 0: q_t -> delta_e entrywise and monotone as t shrinks
    shrink = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
    monotone = True
    for x in group.elements():
        vals = [density.q(t).values[x] for t in shrink]
        if x == group.identity:
            monotone &= all(vals[i] <= vals[i + 1] + 1e-15
                            for i in range(len(vals) - 1))
        else:
            monotone &= all(vals[i] >= vals[i + 1] - 1e-15
                            for i in range(len(vals) - 1))
    res.update({
        "semigroup": conv_err,
        "central": central_err,
        "mass": mass_err,
        "positivity": positivity_err,
        "weak_continuity_monotone": monotone,
    })
    return res


# ---------------------------------------------------------------------------
# the configuration measure
# ---------------------------------------------------------------------------

def phi_A(domain: Cell, cell: Cell, complex_: CellComplex):
    """The domain's reading of one complex cell: the cell itself when its
    orientation matches the induced boundary orientation, its reversal when
    opposite, None when off the boundary; raises on partial containment."""
    if complex_ is not None:
        complex_.index_of(cell)
    for facet, _ in domain.facets():
        if box_contains(facet.box(), cell.box()):
            return cell if cell.sign == facet.sign else cell.reverse()
    for facet, _ in domain.facets():
        inter = box_intersect(cell.box(), facet.box())
        if inter is not None and box_dim(inter) == cell.dim:
            raise ValueError(f"cell {cell!r} lies partially on the boundary of {domain!r}")
    return None


class ComplexMeasure:
    """Unnormalized density on G^K for a saturated complex with box domains."""

    def __init__(self, complex_: CellComplex, domains, density: SemigroupDensity,
                 check=True):
        self.complex = complex_
        self.domains = tuple(domains)
        self.density = density
        self.group = density.group
        if check:
            if not is_regular(complex_):
                raise ValueError("complex is not regular")
            if not is_saturated(complex_, self.domains):
                raise ValueError("complex is not saturated for the domains")
        self.words = tuple(boundary_word(dom, complex_) for dom in self.domains)
        self.volumes = tuple(dom.volume for dom in self.domains)
        self.q_tables = tuple(density.q(v).values for v in self.volumes)

    def n_cells(self) -> int:
        return len(self.complex)

    def phi_value(self, domain_index: int, config) -> int:
        group = self.group
        out = group.identity
        for pos, exp in self.words[domain_index]:
            v = config[pos]
            if exp < 0:
                v = group.inv(v)
            out = group.mul(out, v)
        return out

    def density_of(self, config) -> float:
        """Product over domains of q_{|A_i|}(phi_{A_i}(C)); config is a
        tuple of group elements aligned with the complex order."""
        out = 1.0
        for i in range(len(self.domains)):
            out *= self.q_tables[i][self.phi_value(i, config)]
        return out

    def configurations(self):
        return iter_product(self.group.elements(), repeat=len(self.complex))

    def total_mass(self) -> float:
        return sum(self.density_of(c) for c in self.configurations())

    def normalized_density(self, config) -> float:
        total = self.total_mass()
        if total == 0:
            raise ValueError("measure has zero total mass")
        return self.density_of(config) / total

    def conditional_mass(self, fixed: dict) -> float:
        """Sum of densities over configurations extending the fixed cell
        values (positions -> elements); the alpha-conditioned kernel."""
        free = [i for i in range(len(self.complex)) if i not in fixed]
        total = 0.0
        for combo in iter_product(self.group.elements(), repeat=len(free)):
            config = [0] * len(self.complex)
            for pos, val in fixed.items():
                config[pos] = val
            for pos, val in zip(free, combo):
                config[pos] = val
            total += self.density_of(tuple(config))
        return total

    def region_cells(self):
        """Unit top-cells of the union of the domains (the ambient region)."""
        return [piece for dom in self.domains for piece in dom.unit_pieces()]


def mu_K(complex_: CellComplex, domains, density: SemigroupDensity, config) -> float:
    return ComplexMeasure(complex_, domains, density).density_of(tuple(config))


# ---------------------------------------------------------------------------
# Markov property
# ---------------------------------------------------------------------------

def markov_check(measure: ComplexMeasure, lo: int, hi: int, f_plus, f_minus,
                 region=None):
    """Both sides of the conditional-independence identity, per conditioning
    value on the splitting subcomplex.

    f_plus / f_minus are called with a dict {position: value} restricted to
    the cells of their side (component closure plus the splitting cells);
    dependence outside the region is structurally impossible.  Returns
    (table, max_residual) where table maps each L-assignment to a
    (lhs, rhs) pair or None on zero-mass conditioning events.
    """
    complex_ = measure.complex
    if region is None:
        region = measure.region_cells()
    split = splits(complex_, lo, hi, region)
    if split is None:
        raise ValueError("the subcomplex does not split the region")
    m_plus, m_minus, _, _ = split

    def side_positions(component):
        out = []
        boxes = [c.box() for c in component]
        for i, cell in enumerate(complex_.cells):
            if lo <= i <= hi:
                out.append(i)
            elif all(any(box_contains(b, piece.box()) for b in boxes)
                     for piece in cell.unit_pieces()):
                out.append(i)
        return out

    plus_positions = side_positions(m_plus)
    minus_positions = side_positions(m_minus)
    l_positions = list(range(lo, hi + 1))

    sums = {}
    for config in measure.configurations():
        w = measure.density_of(config)
        key = tuple(config[i] for i in l_positions)
        fp = f_plus({i: config[i] for i in plus_positions})
        fm = f_minus({i: config[i] for i in minus_positions})
        acc = sums.setdefault(key, [0.0, 0.0, 0.0, 0.0])
        acc[0] += w
        acc[1] += w * fp * fm
        acc[2] += w * fp
        acc[3] += w * fm
    table = {}
    max_residual = 0.0
    for key, (mass, both, plus, minus) in sums.items():
        if mass == 0.0:
            table[key] = None
            continue
        lhs = both / mass
        rhs = (plus / mass) * (minus / mass)
        table[key] = (lhs, rhs)
        max_residual = max(max_residual, abs(lhs - rhs))
    return table, max_residual


# ---------------------------------------------------------------------------
# reordering action
# ---------------------------------------------------------------------------

def sigma_action(perm, complex_: CellComplex) -> CellComplex:
    """Reorder the complex by a permutation of its index set."""
    perm = tuple(perm)
    if sorted(perm) != list(range(len(complex_))):
        raise ValueError("not a permutation of the complex indices")
    return CellComplex(tuple(complex_.cells[p] for p in perm))


def reorder_max_difference(measure: ComplexMeasure, perm) -> float:
    """max over configurations of |mu_{sigma K}(C) - mu_K(C)| (C is attached
    to cells, not to positions, so the configuration is permuted along)."""
    permuted = sigma_action(perm, measure.complex)
    other = ComplexMeasure(permuted, measure.domains, measure.density, check=False)
    worst = 0.0
    for config in measure.configurations():
        moved = tuple(config[perm[i]] for i in range(len(perm)))
        worst = max(worst, abs(measure.density_of(config) - other.density_of(moved)))
    return worst


def find_reorder_counterexample(measure: ComplexMeasure, rng, attempts=2000):
    """Search for a permutation and configuration with different densities."""
    n = len(measure.complex)
    for _ in range(attempts):
        perm = list(range(n))
        rng.shuffle(perm)
        permuted = sigma_action(perm, measure.complex)
        other = ComplexMeasure(permuted, measure.domains, measure.density,
                               check=False)
        for config in measure.configurations():
            moved = tuple(config[perm[i]] for i in range(n))
            if abs(measure.density_of(config) - other.density_of(moved)) > 1e-9:
                return tuple(perm), config
    return None


# ---------------------------------------------------------------------------
# adapted complexes, cutting and pasting
# ---------------------------------------------------------------------------

class CobordismBox:
    """An axis-aligned box read as a cobordism along a time axis: the lower
    face in that axis is the initial part, the upper face the final part."""

    def __init__(self, spans, axis: int = 0):
        self.spans = tuple((int(lo), int(hi)) for lo, hi in spans)
        if any(lo >= hi for lo, hi in self.spans):
            raise ValueError("box must be non-degenerate in every axis")
        if not 0 <= axis < len(self.spans):
            raise ValueError("time axis outside the box dimension")
        self.axis = axis

    @property
    def dim(self):
        return len(self.spans)

    def cell(self) -> Cell:
        return domain_box(self.spans)

    def box(self):
        return self.spans

    def alpha_box(self):
        lo = self.spans[self.axis][0]
        return tuple((lo, lo) if a == self.axis else span
                     for a, span in enumerate(self.spans))

    def beta_box(self):
        hi = self.spans[self.axis][1]
        return tuple((hi, hi) if a == self.axis else span
                     for a, span in enumerate(self.spans))

    def face_boxes(self):
        out = []
        for a, (lo, hi) in enumerate(self.spans):
            out.append(tuple((lo, lo) if b == a else span
                             for b, span in enumerate(self.spans)))
            out.append(tuple((hi, hi) if b == a else span
                             for b, span in enumerate(self.spans)))
        return out

    def compose(self, earlier: "CobordismBox") -> "CobordismBox":
        if self.axis != earlier.axis:
            raise ValueError("time axes differ")
        if self.alpha_box() != earlier.beta_box():
            raise ValueError("initial part does not match the earlier final part")
        spans = list(self.spans)
        spans[self.axis] = (earlier.spans[self.axis][0], self.spans[self.axis][1])
        return CobordismBox(spans, self.axis)

    def __repr__(self):
        return f"CobordismBox({self.spans}, axis={self.axis})"


def is_adapted(complex_: CellComplex, cob: CobordismBox) -> bool:
    """Transversality at the cobordism border: no cell has interior points
    on the initial or final face, and facets landing on the initial (final)
    face are labelled initial (final).  Point cells are trivially
    transversal, and cells along the lateral faces of the box (which a
    genuine cobordism does not have) are unconstrained."""
    alpha = cob.alpha_box()
    beta = cob.beta_box()
    for cell in complex_.cells:
        if cell.dim == 0:
            continue
        if _meets_interior(cell, alpha) or _meets_interior(cell, beta):
            return False
        for facet, lbl in cell.facets():
            fbox = facet.box()
            if box_contains(alpha, fbox) and lbl != INITIAL:
                return False
            if box_contains(beta, fbox) and lbl != FINAL:
                return False
    return True


class BorderPiece:
    """One piece of the border reduction: the closure (in the box border) of
    the interior of a component of a domain boundary, with the orientation
    induced by the border and initial/final labels on its own border."""

    def __init__(self, cells, border_labels):
        self.cells = tuple(cells)
        self.border_labels = tuple(border_labels)

    def boxes(self):
        return [c.box() for c in self.cells]

    def __repr__(self):
        return f"BorderPiece({list(self.cells)!r})"


def border_reduce(complex_: CellComplex, cob: CobordismBox, domains):
    """Unordered complex induced on the border of the box by the covering.

    For each domain, each connected component of (domain boundary) ∩ (box
    border) becomes one piece; piece cells inherit the border orientation
    of the box, and the piece's own border gets initial/final labels from
    the induced orientation of the complex cells meeting it.
    """
    y_cell = cob.cell()
    face_signs = {f.box(): f.sign for f, _ in y_cell.facets()}
    pieces = []
    for dom in domains:
        fragments = []
        for facet, _ in dom.facets():
            for ybox, ysign in face_signs.items():
                inter = box_intersect(facet.box(), ybox)
                if inter is not None and box_dim(inter) == cob.dim - 1:
                    fragments.append((inter, ysign))
        used = [False] * len(fragments)
        for start in range(len(fragments)):
            if used[start]:
                continue
            comp = [start]
            used[start] = True
            queue = [start]
            while queue:
                cur = queue.pop()
                for other in range(len(fragments)):
                    if used[other]:
                        continue
                    inter = box_intersect(fragments[cur][0], fragments[other][0])
                    if inter is not None and box_dim(inter) == cob.dim - 2:
                        used[other] = True
                        comp.append(other)
                        queue.append(other)
            cells = [domain_box(fragments[i][0], sign=fragments[i][1]) for i in comp]
            labels = set()
            boxes = [fragments[i][0] for i in comp]
            dom_facet_boxes = [f.box() for f, _ in dom.facets()]
            for s in complex_.cells:
                # only cells of the complex on this domain's own boundary
                if not any(box_contains(fb, s.box()) for fb in dom_facet_boxes):
                    continue
                inter_boxes = [box_intersect(s.box(), b) for b in boxes]
                touched = [b for b in inter_boxes if b is not None]
                if not touched:
                    continue
                if any(box_dim(b) >= cob.dim - 1 for b in touched):
                    continue  # s lies inside the piece, not on its border
                for facet, _ in s.facets():
                    for b in touched:
                        if box_contains(facet.box(), b):
                            labels.add((b, INITIAL if facet.sign < 0 else FINAL))
            pieces.append(BorderPiece(cells, sorted(labels)))
    return pieces


def is_complex_for_cobordism(complex_: CellComplex, cob: CobordismBox,
                             domains=None) -> bool:
    """The complex partitions into an alpha-face covering, a beta-face
    covering, and an adapted saturating part (saturation checked when the
    domains are supplied)."""
    alpha = cob.alpha_box()
    beta = cob.beta_box()
    k = complex_.cells[0].dim if complex_.cells else 0
    k_alpha, k_beta, k_a = [], [], []
    for cell in complex_.cells:
        if box_contains(alpha, cell.box()):
            k_alpha.append(cell)
        elif box_contains(beta, cell.box()):
            k_beta.append(cell)
        else:
            k_a.append(cell)
    if covered_volume(alpha, k_alpha, k) != box_volume(alpha):
        return False
    if covered_volume(beta, k_beta, k) != box_volume(beta):
        return False
    if not is_adapted(CellComplex(k_a), cob):
        return False
    if domains is not None and not is_saturated(complex_, domains):
        return False
    return True


class CutResult:
    def __init__(self, k, k_prime, k_b, y, y_prime):
        self.k = k
        self.k_prime = k_prime
        self.k_b = k_b
        self.y = y
        self.y_prime = y_prime


def cut(cob: CobordismBox, complex_: CellComplex, interface: int) -> CutResult:
    """Cut the box at a time coordinate: the later part keeps the final-face
    covering, the earlier part the initial-face covering, and both share
    the interface covering; orders are induced by the ambient complex."""
    lo, hi = cob.spans[cob.axis]
    if not lo < interface < hi:
        raise ValueError("interface must be strictly inside the time span")
    spans_later = list(cob.spans)
    spans_later[cob.axis] = (interface, hi)
    spans_earlier = list(cob.spans)
    spans_earlier[cob.axis] = (lo, interface)
    y = CobordismBox(spans_later, cob.axis)
    y_prime = CobordismBox(spans_earlier, cob.axis)
    plane = tuple((interface, interface) if a == cob.axis else span
                  for a, span in enumerate(cob.spans))
    in_later, in_earlier, shared = [], [], []
    for cell in complex_.cells:
        cbox = cell.box()
        if box_contains(plane, cbox):
            shared.append(cell)
            in_later.append(cell)
            in_earlier.append(cell)
        elif box_contains(tuple(spans_later), cbox):
            in_later.append(cell)
        elif box_contains(tuple(spans_earlier), cbox):
            in_earlier.append(cell)
        else:
            raise ValueError(f"cell {cell!r} crosses the cutting interface")
    if covered_volume(plane, shared, complex_.cells[0].dim) != box_volume(plane):
        raise ValueError("the interface is not covered by complex cells")
    return CutResult(CellComplex(in_later), CellComplex(in_earlier),
                     CellComplex(shared), y, y_prime)


def paste(k: CellComplex, k_prime: CellComplex, cos=None, cos_prime=None) -> CellComplex:
    """Interleave two complexes sharing an ordered interface covering.

    The shared cells must occur in the same relative order with equal
    orientations and facet labels (condition A); when cosurfaces are given
    their values must agree on the shared cells (condition B).  The merge
    walks the shared cells in order, inserting the strictly-between runs of
    the first complex and then of the second, so that re-extracting either
    complex from the result preserves its order.
    """
    if len(k_prime) == 0:
        return k
    if len(k) == 0:
        return k_prime
    keys_k = {c.key(): i for i, c in enumerate(k.cells)}
    shared = []
    for j, cell in enumerate(k_prime.cells):
        i = keys_k.get(cell.key())
        if i is None:
            continue
        if k.cells[i] != cell:
            raise ValueError(f"shared cell {cell!r} differs in orientation or labels")
        shared.append((i, j))
    if not shared:
        raise ValueError("complexes share no interface covering")
    if [i for i, _ in shared] != sorted(i for i, _ in shared):
        raise ValueError("shared cells occur in different orders")
    if cos is not None and cos_prime is not None:
        for i, _ in shared:
            cell = k.cells[i]
            if cos.value(cell) != cos_prime.value(cell):
                raise ValueError(f"cosurface values differ on shared cell {cell!r}")
    out = []
    prev_i, prev_j = -1, -1
    for i, j in shared:
        out.extend(k.cells[prev_i + 1:i])
        out.extend(k_prime.cells[prev_j + 1:j])
        out.append(k.cells[i])
        prev_i, prev_j = i, j
    out.extend(k.cells[prev_i + 1:])
    out.extend(k_prime.cells[prev_j + 1:])
    return CellComplex(out)


def extract(k_pasted: CellComplex, original: CellComplex) -> CellComplex:
    """Subsequence of the pasted complex consisting of the original's cells."""
    keys = {c.key() for c in original.cells}
    return CellComplex([c for c in k_pasted.cells if c.key() in keys])


def factorization_check(k: CellComplex, k_prime: CellComplex, k_pp: CellComplex,
                        domains_later, domains_earlier, density: SemigroupDensity,
                        tol=1e-12, domains_pasted=None):
    """Exhaustively verify mu_K(C) * mu_K'(C') = mu_K''(C'') over all
    configurations of the pasted complex.

    ``domains_later`` cover the later piece (whose complex is k) and
    ``domains_earlier`` the earlier one.  The pasted measure must list the
    earlier domains first; a ``domains_pasted`` ordering violating that is
    rejected for non-abelian groups rather than silently reordered.
    """
    group = density.group
    if domains_pasted is None:
        domains_pasted = tuple(domains_earlier) + tuple(domains_later)
    elif not group.is_abelian:
        earlier_keys = {dom.key() for dom in domains_earlier}
        seen_later = False
        for dom in domains_pasted:
            if dom.key() in earlier_keys:
                if seen_later:
                    raise ValueError(
                        "non-abelian pasting requires the earlier-piece domains "
                        "at the beginning of the list")
            else:
                seen_later = True
    measure_pp = ComplexMeasure(k_pp, tuple(domains_pasted), density)
    measure_k = ComplexMeasure(k, domains_later, density)
    measure_kp = ComplexMeasure(k_prime, domains_earlier, density)
    pos_k = [k_pp.index_of(c) for c in k.cells]
    pos_kp = [k_pp.index_of(c) for c in k_prime.cells]
    worst = 0.0
    for config in measure_pp.configurations():
        c_later = tuple(config[p] for p in pos_k)
        c_earlier = tuple(config[p] for p in pos_kp)
        product = measure_k.density_of(c_later) * measure_kp.density_of(c_earlier)
        worst = max(worst, abs(product - measure_pp.density_of(config)))
    return worst <= tol, worst


# ---------------------------------------------------------------------------
# lattice model densities (evaluation only, no partition functions)
# ---------------------------------------------------------------------------

def gibbs_density(cosurface, complex_: CellComplex, beta: float,
                  action: GroupFunction, plaquettes) -> float:
    """exp(-beta * sum over plaquettes of U(boundary holonomy)); U must be
    a class function (invariant action)."""
    if not is_class_function(action):
        raise ValueError("the action must be a class function")
    if beta < 0:
        raise ValueError("coupling constant must be >= 0")
    total = 0.0
    for plaq in plaquettes:
        word = boundary_word(plaq, complex_)
        total += action.values[cosurface.evaluate_word(complex_, word)]
    return math.exp(-beta * total)


def zn_rotation(group: FiniteGroup):
    """The rotation action of Z_n on the plane, element k -> angle 2 pi k/n."""
    n = group.order
    if group.table != tuple(tuple((a + b) % n for b in range(n)) for a in range(n)):
        raise ValueError("built-in plane rotations exist only for cyclic groups")

    def rho(g: int):
        angle = 2.0 * math.pi * g / n
        return ((math.cos(angle), -math.sin(angle)),
                (math.sin(angle), math.cos(angle)))

    return rho


def higgs_density(site_field, cosurface, complex_: CellComplex, lam: float,
                  mu: float, b: float, rho, sites) -> float:
    """Literal two-field lattice density: a quadratic site term plus a
    site-pair coupling through the rotated cosurface value on each edge."""
    sites = [tuple(s) for s in sites]
    site_set = set(sites)
    quad = 0.0
    for x in sites:
        vx, vy = site_field[x]
        quad += (b + mu * mu / lam) * (vx * vx + vy * vy)
    pair = 0.0
    for cell in complex_.cells:
        if cell.dim != 1 or cell.extents != (1,):
            raise ValueError("site coupling needs a unit-edge complex")
        x0 = cell.base
        x1 = tuple(b + (1 if a == cell.axes[0] else 0)
                   for a, b in enumerate(cell.base))
        if x0 not in site_set or x1 not in site_set:
            continue
        # both ordered pairs (x, y) and (y, x) contribute, with C(yx) = C(xy)^-1
        for start, end, oriented in ((x0, x1, cell), (x1, x0, cell.reverse())):
            g = cosurface.value(oriented)
            m = rho(g)
            px, py = site_field[start]
            qx, qy = site_field[end]
            rx = m[0][0] * qx + m[0][1] * qy
            ry = m[1][0] * qx + m[1][1] * qy
            pair += px * rx + py * ry
    return math.exp(-(lam / 2.0) * quad - (lam / 2.0) * pair)


# ---------------------------------------------------------------------------
# measure-valued series
# ---------------------------------------------------------------------------

def measure_series(groupoid, density: SemigroupDensity, order: int) -> FormalSeries:
    """The series assigning to each index its heat density at the index
    volume; multiplicative under composition because the family is a
    convolution semigroup."""
    unit = delta(density.group, normalization=COUNTING)
    coeffs = {}
    for elem in groupoid.elements_up_to(order):
        coeffs[elem] = density.q(groupoid.ord(elem))
    return FormalSeries(groupoid, order, coeffs, unit)


def measure_series_multiplicativity(series: FormalSeries, tol=1e-12):
    """Worst |coefficient(i∘j) - coefficient(i) * coefficient(j)| over all
    composable pairs inside the truncation window."""
    gpd = series.groupoid
    elems = gpd.elements_up_to(series.order)
    worst = 0.0
    for i in elems:
        for j in elems:
            k = gpd.compose(i, j)
            if k is None or gpd.ord(k) > series.order:
                continue
            lhs = series.coefficient(k)
            rhs = series.coefficient(i) * series.coefficient(j)
            worst = max(worst, max(abs(a - b)
                                   for a, b in zip(lhs.values, rhs.values)))
    return worst <= tol, worst
