"""Oriented lattice box cells, ordered complexes, and group-valued cosurfaces.

A cell is an axis-aligned integer box of dimension k inside Z^d: a base
point, the k spanned axes, an extent per spanned axis, and an orientation
sign.  Facets follow the cubical boundary rule with alternating signs
(position i in the sorted axis list contributes (-1)^i on the upper side);
by default negative facets are initial and positive facets final, which can
be overridden per facet.  Reversing a cell flips the sign and swaps the
initial/final assignment.

A complex is an ordered sequence of distinct cells of equal dimension; the
order is semantically relevant for every non-abelian product taken along
it.  The bridge between complexes and measures is ``boundary_word``: the
ordered, signed list of complex positions a domain boundary reads off.
"""

from __future__ import annotations

from dataclasses import dataclass, field


# ---------------------------------------------------------------------------
# box arithmetic (boxes are tuples of (lo, hi) per ambient axis, lo <= hi)
# ---------------------------------------------------------------------------

def box_intersect(a, b):
    out = []
    for (alo, ahi), (blo, bhi) in zip(a, b):
        lo, hi = max(alo, blo), min(ahi, bhi)
        if lo > hi:
            return None
        out.append((lo, hi))
    return tuple(out)


def box_contains(outer, inner) -> bool:
    return all(olo <= ilo and ihi <= ohi
               for (olo, ohi), (ilo, ihi) in zip(outer, inner))


def box_dim(box) -> int:
    return sum(1 for lo, hi in box if hi > lo)


def box_volume(box) -> int:
    vol = 1
    for lo, hi in box:
        vol *= max(hi - lo, 1) if hi > lo else 1
    return vol if box_dim(box) else 1


def box_union(a, b):
    """Union of two boxes when it is again a box (shared full facet), else None."""
    diff_axes = [i for i, (ia, ib) in enumerate(zip(a, b)) if ia != ib]
    if len(diff_axes) != 1:
        return None if diff_axes else a
    ax = diff_axes[0]
    (alo, ahi), (blo, bhi) = a[ax], b[ax]
    if ahi == blo or bhi == alo:
        merged = list(a)
        merged[ax] = (min(alo, blo), max(ahi, bhi))
        return tuple(merged)
    return None


INITIAL = "initial"
FINAL = "final"


@dataclass(frozen=True)
class Cell:
    """Oriented box cell; ``labels`` overrides the default facet assignment."""

    base: tuple
    axes: tuple
    extents: tuple
    sign: int = 1
    labels: tuple = field(default=(), compare=True)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("orientation sign must be +1 or -1")
        if tuple(sorted(set(self.axes))) != tuple(self.axes):
            raise ValueError("axes must be sorted and distinct")
        if len(self.extents) != len(self.axes):
            raise ValueError("one extent per spanned axis")
        if any(e < 1 for e in self.extents):
            raise ValueError("extents must be >= 1")
        if any(not 0 <= a < len(self.base) for a in self.axes):
            raise ValueError("axis outside the ambient dimension")

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def ambient_dim(self) -> int:
        return len(self.base)

    @property
    def volume(self) -> int:
        vol = 1
        for e in self.extents:
            vol *= e
        return vol

    def key(self):
        """Unoriented geometry key."""
        return (self.base, self.axes, self.extents)

    def box(self):
        spans = dict(zip(self.axes, self.extents))
        return tuple((b, b + spans.get(a, 0)) for a, b in enumerate(self.base))

    def reverse(self) -> "Cell":
        swapped = tuple((k, FINAL if lbl == INITIAL else INITIAL)
                        for k, lbl in self.labels)
        return Cell(self.base, self.axes, self.extents, -self.sign, swapped)

    def facets(self):
        """All facet cells with their induced absolute sign and label."""
        out = []
        overrides = dict(self.labels)
        for pos, axis in enumerate(self.axes):
            rest_axes = self.axes[:pos] + self.axes[pos + 1:]
            rest_exts = self.extents[:pos] + self.extents[pos + 1:]
            upper_rel = (-1) ** pos
            for upper in (False, True):
                base = list(self.base)
                if upper:
                    base[axis] += self.extents[pos]
                rel = upper_rel if upper else -upper_rel
                facet = Cell(tuple(base), rest_axes, rest_exts, self.sign * rel)
                label = overrides.get(facet.key())
                if label is None:
                    label = INITIAL if facet.sign < 0 else FINAL
                out.append((facet, label))
        return out

    def alpha(self):
        """Initial facets (each carried with its induced sign)."""
        return tuple(f for f, lbl in self.facets() if lbl == INITIAL)

    def beta(self):
        return tuple(f for f, lbl in self.facets() if lbl == FINAL)

    def with_labels(self, labels) -> "Cell":
        return Cell(self.base, self.axes, self.extents, self.sign,
                    tuple(sorted(labels)))

    def unit_pieces(self):
        """Decompose the box into unit cells of the same dimension and sign."""
        if all(e == 1 for e in self.extents):
            return [Cell(self.base, self.axes, (1,) * self.dim, self.sign)]
        pieces = []

        def rec(pos, base):
            if pos == self.dim:
                pieces.append(Cell(tuple(base), self.axes, (1,) * self.dim, self.sign))
                return
            axis = self.axes[pos]
            for off in range(self.extents[pos]):
                nxt = list(base)
                nxt[axis] = self.base[axis] + off
                rec(pos + 1, nxt)

        rec(0, list(self.base))
        return pieces

    def __repr__(self):
        spans = dict(zip(self.axes, self.extents))
        span = "x".join(f"{b}..{b + spans[a]}" if a in spans else str(b)
                        for a, b in enumerate(self.base))
        sgn = "+" if self.sign > 0 else "-"
        return f"Cell[{sgn}{span}]"


def unit_cell(base, axes, sign=1) -> Cell:
    return Cell(tuple(base), tuple(axes), (1,) * len(tuple(axes)), sign)


def point_cell(base, sign=1) -> Cell:
    return Cell(tuple(base), (), (), sign)


def edge_cell(base, axis, sign=1) -> Cell:
    return Cell(tuple(base), (axis,), (1,), sign)


def square_cell(base, axes, sign=1) -> Cell:
    return Cell(tuple(base), tuple(axes), (1, 1), sign)


def domain_box(spans, sign=1, labels=()) -> Cell:
    """Full box on the given per-axis spans; degenerate axes stay unspanned."""
    spans = tuple(spans)
    base = tuple(lo for lo, hi in spans)
    axes = tuple(a for a, (lo, hi) in enumerate(spans) if hi > lo)
    extents = tuple(hi - lo for lo, hi in spans if hi > lo)
    return Cell(base, axes, extents, sign, tuple(sorted(labels)))


class CellComplex:
    """Ordered sequence of pairwise-distinct cells of one dimension."""

    def __init__(self, cells):
        cells = tuple(cells)
        if cells:
            dims = {c.dim for c in cells}
            if len(dims) != 1:
                raise ValueError("complex cells must share one dimension")
            keys = [c.key() for c in cells]
            if len(set(keys)) != len(keys):
                raise ValueError("complex cells must be pairwise distinct")
        self.cells = cells

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def __getitem__(self, i):
        return self.cells[i]

    def index_of(self, cell) -> int:
        for i, c in enumerate(self.cells):
            if c.key() == cell.key():
                return i
        raise ValueError(f"{cell!r} is not in the complex")

    def subcomplex(self, lo: int, hi: int) -> "CellComplex":
        """Contiguous subsequence cells[lo:hi+1]."""
        if not 0 <= lo <= hi < len(self.cells):
            raise ValueError("subcomplex indices out of range")
        return CellComplex(self.cells[lo:hi + 1])

    def __eq__(self, other):
        return isinstance(other, CellComplex) and self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def __repr__(self):
        return f"CellComplex({list(self.cells)!r})"


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------

def _meets_interior(cell: Cell, box) -> bool:
    """True when the box intersects the relative interior of the cell."""
    inter = box_intersect(cell.box(), box)
    if inter is None:
        return False
    spans = dict(zip(cell.axes, cell.extents))
    for axis in cell.axes:
        lo, hi = inter[axis]
        olo = cell.base[axis]
        ohi = olo + spans[axis]
        if not (hi > olo and lo < ohi):
            return False
    return True


def is_regular(complex_: CellComplex) -> bool:
    """Cells meet only along shared boundary pieces (no interior overlap)."""
    cells = complex_.cells
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            inter = box_intersect(cells[i].box(), cells[j].box())
            if inter is None:
                continue
            if _meets_interior(cells[i], inter) or _meets_interior(cells[j], inter):
                return False
    return True


def covered_volume(target_box, cells, dim) -> int:
    """Total dim-volume of the parts of the cells inside target_box."""
    total = 0
    for cell in cells:
        inter = box_intersect(cell.box(), target_box)
        if inter is not None and box_dim(inter) == dim:
            total += box_volume(inter)
    return total


def is_saturated(complex_: CellComplex, domains) -> bool:
    """The cells exactly cover the boundaries of the (pairwise interior-
    disjoint) domain boxes."""
    if not is_regular(complex_):
        return False
    domains = list(domains)
    k = complex_.cells[0].dim if complex_.cells else 0
    for i in range(len(domains)):
        for j in range(i + 1, len(domains)):
            inter = box_intersect(domains[i].box(), domains[j].box())
            if inter is None:
                continue
            if _meets_interior(domains[i], inter) or _meets_interior(domains[j], inter):
                return False
    for dom in domains:
        for facet, _ in dom.facets():
            fbox = facet.box()
            if covered_volume(fbox, complex_.cells, k) != box_volume(fbox):
                return False
    boundary = [f.box() for dom in domains for f, _ in dom.facets()]
    for cell in complex_.cells:
        pieces = cell.unit_pieces()
        for piece in pieces:
            if not any(box_contains(b, piece.box()) for b in boundary):
                return False
    return True


def region_components(region_cells, blocked_boxes):
    """Connected components of top-dimensional unit cells; two cells are
    adjacent when they share a facet not contained in a blocked box."""
    region = list(region_cells)
    n = len(region)
    facet_boxes = [[f.box() for f, _ in c.facets()] for c in region]
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            shared = box_intersect(region[i].box(), region[j].box())
            if shared is None or box_dim(shared) != region[i].dim - 1:
                continue
            if shared not in facet_boxes[i] or shared not in facet_boxes[j]:
                continue
            if any(box_contains(b, shared) for b in blocked_boxes):
                continue
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(region[i])
    return list(groups.values())


def _inside_closure(cell: Cell, component) -> bool:
    boxes = [c.box() for c in component]
    return all(any(box_contains(b, piece.box()) for b in boxes)
               for piece in cell.unit_pieces())


def splits(complex_: CellComplex, lo: int, hi: int, region):
    """Check that the contiguous subcomplex cells[lo:hi+1] separates the
    region into two components with the before/after cells on either side.

    Returns (M_plus, M_minus, K_plus, K_minus) or None; region is a list of
    top-dimensional unit cells (one dimension above the complex cells).
    """
    sub = complex_.subcomplex(lo, hi)
    blocked = [c.box() for c in sub.cells]
    comps = region_components(region, blocked)
    if len(comps) != 2:
        return None
    before = complex_.cells[:lo]
    after = complex_.cells[hi + 1:]
    fits_before = [idx for idx, comp in enumerate(comps)
                   if all(_inside_closure(c, comp) for c in before)]
    fits_after = [idx for idx, comp in enumerate(comps)
                  if all(_inside_closure(c, comp) for c in after)]
    for minus_idx in (fits_before if before else (0, 1)):
        for plus_idx in (fits_after if after else (0, 1)):
            if minus_idx != plus_idx:
                return (tuple(comps[plus_idx]), tuple(comps[minus_idx]),
                        CellComplex(after), CellComplex(before))
    return None


def refines(coarse: CellComplex, fine: CellComplex) -> bool:
    """Every cell of the coarse complex is the in-order gluing of some
    contiguous subcomplex of the fine one."""
    for cell in coarse.cells:
        if not any(_run_composes_to(fine.cells[l:m + 1], cell)
                   for l in range(len(fine.cells))
                   for m in range(l, len(fine.cells))):
            return False
    return True


def _run_composes_to(run, cell: Cell) -> bool:
    if not run:
        return False
    acc = run[0]
    for nxt in run[1:]:
        acc = glue(acc, nxt, "*")
        if acc is None:
            return False
        if isinstance(acc, Composite):
            return False
    return acc.key() == cell.key() and acc.sign == cell.sign


# ---------------------------------------------------------------------------
# gluing
# ---------------------------------------------------------------------------

class Composite:
    """Ordered gluing of cells whose union is not a box; embedded point set."""

    def __init__(self, parts, alpha, beta):
        parts = tuple(parts)
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                inter = box_intersect(parts[i].box(), parts[j].box())
                if inter is not None and (_meets_interior(parts[i], inter)
                                          or _meets_interior(parts[j], inter)):
                    raise ValueError("composite point set must be embedded")
        self.parts = parts
        self.alpha = tuple(alpha)
        self.beta = tuple(beta)

    def boxes(self):
        return [p.box() for p in self.parts]

    def __repr__(self):
        return f"Composite({list(self.parts)!r})"


def glue(s1, s2, mode="*"):
    """Glue two cells; returns a Cell (box union), a Composite, or None.

    Mode "v": the cells must share a full facet with opposite induced
    orientations.  Mode "*": gluing happens along a = alpha(s1) ∩ beta(s2);
    the new initial part is alpha(s2) ∪ (alpha(s1) − a) and the new final
    part beta(s1) ∪ (beta(s2) − a).
    """
    if mode not in ("*", "v"):
        raise ValueError("mode must be '*' or 'v'")
    if s1.dim != s2.dim:
        return None
    if mode == "v":
        shared = _matching_facets(s1, s2, lambda f1, l1, f2, l2: f1.sign == -f2.sign)
        if not shared:
            return None
        alpha = [f for f, lbl in s1.facets() + s2.facets() if lbl == INITIAL
                 and f.key() not in {f1.key() for f1, _ in shared}]
        beta = [f for f, lbl in s1.facets() + s2.facets() if lbl == FINAL
                and f.key() not in {f1.key() for f1, _ in shared}]
    else:
        shared = _matching_facets(
            s1, s2,
            lambda f1, l1, f2, l2: l1 == INITIAL and l2 == FINAL)
        if not shared:
            return None
        shared_keys = {f1.key() for f1, _ in shared}
        alpha = ([f for f, lbl in s2.facets() if lbl == INITIAL]
                 + [f for f, lbl in s1.facets()
                    if lbl == INITIAL and f.key() not in shared_keys])
        beta = ([f for f, lbl in s1.facets() if lbl == FINAL]
                + [f for f, lbl in s2.facets()
                   if lbl == FINAL and f.key() not in shared_keys])
    union = box_union(s1.box(), s2.box())
    if union is not None and s1.sign == s2.sign:
        boxed = _labelled_box(union, s1.sign, alpha, beta)
        if boxed is not None:
            return boxed
    try:
        return Composite((s1, s2), alpha, beta)
    except ValueError:
        return None


def _matching_facets(s1: Cell, s2: Cell, accept):
    """Pairs of facets of s1 and s2 with identical boxes passing ``accept``."""
    out = []
    f2map = {}
    for f2, l2 in s2.facets():
        f2map[f2.key()] = (f2, l2)
    for f1, l1 in s1.facets():
        hit = f2map.get(f1.key())
        if hit is None:
            continue
        f2, l2 = hit
        if accept(f1, l1, f2, l2):
            out.append((f1, f2))
    return out


def _labelled_box(union_box, sign, alpha, beta):
    """Box cell with facet labels read off the alpha/beta piece lists, or
    None when some facet mixes both labels (the union is not a plain box
    cobordism)."""
    base = tuple(lo for lo, hi in union_box)
    axes = tuple(a for a, (lo, hi) in enumerate(union_box) if hi > lo)
    extents = tuple(hi - lo for lo, hi in union_box if hi > lo)
    cell = Cell(base, axes, extents, sign)
    labels = []
    for facet, default_lbl in cell.facets():
        fbox = facet.box()
        k = facet.dim
        in_alpha = covered_volume(fbox, alpha, k) == box_volume(fbox)
        in_beta = covered_volume(fbox, beta, k) == box_volume(fbox)
        if in_alpha and not in_beta:
            lbl = INITIAL
        elif in_beta and not in_alpha:
            lbl = FINAL
        else:
            return None
        if lbl != default_lbl:
            labels.append((facet.key(), lbl))
    return cell.with_labels(labels)


# ---------------------------------------------------------------------------
# boundary words and cosurfaces
# ---------------------------------------------------------------------------

def boundary_word(domain: Cell, complex_: CellComplex):
    """Ordered signed word the domain boundary reads along the complex.

    Returns [(position, exponent)] in complex order: exponent +1 when the
    listed cell's orientation agrees with the induced boundary orientation
    of the domain, -1 when opposite.  A cell overlapping the boundary
    without being contained in a single face raises (non-adapted); cells
    off the boundary are skipped.
    """
    faces = [(f.box(), f.sign) for f, _ in domain.facets()]
    word = []
    for pos, cell in enumerate(complex_.cells):
        cbox = cell.box()
        matched = None
        for fbox, fsign in faces:
            if box_contains(fbox, cbox):
                matched = fsign
                break
        if matched is not None:
            word.append((pos, 1 if cell.sign == matched else -1))
            continue
        for fbox, _ in faces:
            inter = box_intersect(cbox, fbox)
            if inter is not None and box_dim(inter) == cell.dim:
                raise ValueError(
                    f"cell {cell!r} lies partially on the boundary of {domain!r}")
    return word


def word_missing_boundary(domain: Cell, complex_: CellComplex) -> bool:
    """True when some part of the domain boundary has no covering cell."""
    k = domain.dim - 1
    for facet, _ in domain.facets():
        fbox = facet.box()
        if covered_volume(fbox, complex_.cells, k) != box_volume(fbox):
            return True
    return False


class Cosurface:
    """Group-valued assignment on oriented cells: value(reversed) = inverse.

    Values are stored for the positively oriented representative of each
    generating cell; evaluation on composites multiplies in the given
    order.
    """

    def __init__(self, group, assignments):
        self.group = group
        values = {}
        for cell, value in assignments:
            key = cell.key()
            stored = value if cell.sign > 0 else group.inv(value)
            if key in values and values[key] != stored:
                raise ValueError(f"conflicting values for {cell!r}")
            values[key] = stored
        self.values = values

    def value(self, cell: Cell) -> int:
        key = cell.key()
        if key not in self.values:
            raise ValueError(f"no value assigned on {cell!r}")
        v = self.values[key]
        return v if cell.sign > 0 else self.group.inv(v)

    def evaluate_word(self, complex_: CellComplex, word) -> int:
        out = self.group.identity
        for pos, exp in word:
            v = self.value(complex_.cells[pos])
            if exp < 0:
                v = self.group.inv(v)
            out = self.group.mul(out, v)
        return out

    def evaluate_parts(self, parts) -> int:
        out = self.group.identity
        for cell in parts:
            out = self.group.mul(out, self.value(cell))
        return out


def holonomy_cosurface(field: Cosurface, path) -> int:
    """Holonomy read against the path orientation: the path is reversed
    (each edge flipped, order inverted) and the field values are multiplied
    in traversal order; reversing the path inverts the result."""
    group = field.group
    out = group.identity
    for edge in reversed(list(path)):
        out = group.mul(out, field.value(edge.reverse()))
    return out


def dimension_extend(cosurface: Cosurface, complex_: CellComplex, domain: Cell) -> int:
    """Value on a (k+1)-cell as the ordered product of the boundary word."""
    if word_missing_boundary(domain, complex_):
        raise ValueError(f"boundary of {domain!r} is not covered by the complex")
    word = boundary_word(domain, complex_)
    return cosurface.evaluate_word(complex_, word)


def extend_abelian(cosurface: Cosurface, complex_: CellComplex, domains) -> Cosurface:
    """Dimension extension for abelian groups: one value per domain cell."""
    if not cosurface.group.is_abelian:
        raise ValueError("extend_abelian requires an abelian group")
    pairs = [(dom, dimension_extend(cosurface, complex_, dom)) for dom in domains]
    return Cosurface(cosurface.group, pairs)


# ---------------------------------------------------------------------------
# complex and cosurface files
# ---------------------------------------------------------------------------

def cell_to_doc(cell: Cell) -> dict:
    return {
        "dim": cell.dim,
        "base": list(cell.base),
        "axes": list(cell.axes),
        "extents": list(cell.extents),
        "sign": cell.sign,
        "labels": [[[list(key[0]), list(key[1]), list(key[2])], lbl]
                   for key, lbl in cell.labels],
    }


def cell_from_doc(doc: dict) -> Cell:
    labels = []
    for key, lbl in doc.get("labels", ()):
        if lbl not in (INITIAL, FINAL):
            raise ValueError(f"unknown facet label {lbl!r}")
        labels.append(((tuple(key[0]), tuple(key[1]), tuple(key[2])), lbl))
    cell = Cell(tuple(doc["base"]), tuple(doc["axes"]), tuple(doc["extents"]),
                int(doc["sign"]), tuple(sorted(labels)))
    if "dim" in doc and int(doc["dim"]) != cell.dim:
        raise ValueError("declared dimension does not match the axes")
    return cell


def save_complex(path, complex_: CellComplex, cosurface: Cosurface = None) -> None:
    """Write a complex (cells in order) and optionally a cosurface, whose
    values are listed per cell position as group-element labels."""
    import json

    doc = {"cells": [cell_to_doc(c) for c in complex_.cells]}
    if cosurface is not None:
        group = cosurface.group
        doc["cosurface"] = {
            "group": group.name,
            "values": {str(i): group.labels[cosurface.value(c)]
                       for i, c in enumerate(complex_.cells)},
        }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_complex(path, group=None):
    """Read a complex file; returns (complex, cosurface-or-None)."""
    import json

    from .groups import builtin_group

    with open(path) as fh:
        doc = json.load(fh)
    complex_ = CellComplex([cell_from_doc(d) for d in doc["cells"]])
    cosurface = None
    if "cosurface" in doc:
        cdoc = doc["cosurface"]
        if group is None:
            group = builtin_group(cdoc["group"])
        label_index = {lbl: i for i, lbl in enumerate(group.labels)}
        pairs = []
        for pos_str, label in cdoc["values"].items():
            pos = int(pos_str)
            if not 0 <= pos < len(complex_):
                raise ValueError(f"cosurface value for unknown cell {pos_str!r}")
            if label not in label_index:
                raise ValueError(f"unknown group element label {label!r}")
            pairs.append((complex_.cells[pos], label_index[label]))
        cosurface = Cosurface(group, pairs)
    return complex_, cosurface


def extend_nonabelian(cosurface: Cosurface, complex_: CellComplex, domains,
                      center_assignment=None) -> Cosurface:
    """Dimension extension with central values on cells outside the complex.

    ``center_assignment`` maps extra k-cells (not in the complex) to central
    group elements; the default assigns the identity.  Domains whose
    boundary needs an unassigned, uncovered cell raise.
    """
    group = cosurface.group
    center = set(group.center())
    extra = []
    for cell, value in (center_assignment or {}).items():
        if value not in center:
            raise ValueError(f"value {value} for {cell!r} is not central")
        extra.append((cell, value))
    if extra:
        extended = Cosurface(group, extra)
        extended.values.update(cosurface.values)
        full = CellComplex(tuple(complex_.cells) + tuple(c for c, _ in extra))
    else:
        extended = cosurface
        full = complex_
    pairs = [(dom, dimension_extend(extended, full, dom)) for dom in domains]
    return Cosurface(group, pairs)
