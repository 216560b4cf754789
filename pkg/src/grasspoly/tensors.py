"""Canonical integer-linear combinations of multiplicative symbol tensors.

Elements here model sums of n-fold tensors of multiplicative symbols,
written additively and taken modulo 2-torsion.  Concretely:

* A symbol is either a determinant bracket D[i1,...,ik] over abstract
  vector labels, or a named scalar such as "a".  Bracket index lists are
  stored sorted; the sign of the sorting permutation is discarded, which
  is exactly the mod-2-torsion identification x = -x of the multiplicative
  group written additively.  bracket_symbol(..., signed=True) keeps that
  sign instead, for diagnostics of identities that only hold mod 2.
* A slot of a term is a single symbol.  Products inside a slot are
  expanded by multi-additivity when a tensor is built (tensor_of_slots),
  so a slot holding a^2 b^-1 becomes two stored terms with coefficients
  +2 and -1.
* Terms live in a dict keyed by the tuple of slot symbols, with exact
  rational coefficients (integers stay integers).  Zero coefficients are
  pruned eagerly, so equality of canonical forms is dict equality and the
  zero tensor is the empty dict.

Alternation helpers stream over permutations with cached parities; nothing
materializes the full symmetric group action term lists beyond the merged
result.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product

from .errors import ContractViolation

# A symbol is ("D", (i1, ..., ik)) or ("S", label).
BRACKET = "D"
SCALAR = "S"


def bracket_symbol(indices, signed=False):
    """Canonical bracket symbol over abstract labels, with its sign.

    Returns (symbol, sign).  With signed=False (mod-2 semantics, the
    default) the sign is always +1.  With signed=True the sign is the
    parity of the permutation sorting the given index order.  Repeated
    labels are allowed here; they denote the zero function and are flagged
    by evaluation, not by construction.
    """
    ix = tuple(int(i) for i in indices)
    if not ix:
        raise ContractViolation("empty bracket")
    sign = 1
    if signed:
        lst = list(ix)
        inv = 0
        for a in range(len(lst)):
            for b in range(a + 1, len(lst)):
                if lst[a] > lst[b]:
                    inv += 1
        sign = -1 if inv % 2 else 1
    return (BRACKET, tuple(sorted(ix))), sign


def scalar_symbol(label):
    """Named multiplicative scalar, e.g. a deformation parameter."""
    label = str(label)
    if not label:
        raise ContractViolation("empty scalar label")
    return (SCALAR, label)


def symbol_sort_key(sym):
    kind, payload = sym
    if kind == BRACKET:
        return (0, len(payload), payload)
    return (1, payload)


def symbol_to_str(sym):
    kind, payload = sym
    if kind == BRACKET:
        return "D[" + ",".join(str(i) for i in payload) + "]"
    return payload


def parse_symbol(s):
    s = s.strip()
    if s.startswith("D[") and s.endswith("]"):
        body = s[2:-1]
        ix = tuple(int(p) for p in body.split(",") if p.strip())
        return bracket_symbol(ix)[0]
    if not s:
        raise ContractViolation("empty symbol string")
    return scalar_symbol(s)


@lru_cache(maxsize=None)
def perms_with_signs(k):
    """All permutations of range(k) with their parities, lexicographic."""
    out = []
    for perm in permutations(range(k)):
        inv = 0
        for a in range(k):
            pa = perm[a]
            for b in range(a + 1, k):
                if pa > perm[b]:
                    inv += 1
        out.append((perm, -1 if inv % 2 else 1))
    return tuple(out)


def _norm_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def _coeff_to_json(c):
    c = _norm_coeff(c)
    if isinstance(c, int):
        return c
    return str(c)


def _coeff_from_json(c):
    if isinstance(c, int):
        return c
    if isinstance(c, str):
        return _norm_coeff(Fraction(c))
    raise ContractViolation(f"bad coefficient {c!r}")


class MultTensor:
    """Canonical linear combination of symbol tensors of fixed arity."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity, terms=None):
        arity = int(arity)
        if arity < 1:
            raise ContractViolation("arity must be >= 1")
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "terms", dict(terms or {}))

    def __setattr__(self, name, value):
        raise AttributeError("MultTensor is immutable")

    @classmethod
    def zero(cls, arity):
        return cls(arity, {})

    @classmethod
    def from_terms(cls, arity, pairs):
        """Build from (slots, coeff) pairs, merging and pruning zeros."""
        acc = {}
        for slots, coeff in pairs:
            key = tuple(slots)
            if len(key) != arity:
                raise ContractViolation(
                    f"term has {len(key)} slots, expected {arity}")
            acc[key] = acc.get(key, 0) + coeff
        return cls(arity, {k: _norm_coeff(v) for k, v in acc.items() if v != 0})

    # -- queries -----------------------------------------------------------

    @property
    def term_count(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def items_sorted(self):
        return sorted(self.terms.items(),
                      key=lambda kv: tuple(symbol_sort_key(s) for s in kv[0]))

    def coefficient(self, slots):
        return self.terms.get(tuple(slots), 0)

    # -- algebra -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, MultTensor):
            return NotImplemented
        if other.arity != self.arity:
            raise ContractViolation("arity mismatch in tensor sum")
        acc = dict(self.terms)
        for k, v in other.terms.items():
            new = acc.get(k, 0) + v
            if new == 0:
                acc.pop(k, None)
            else:
                acc[k] = _norm_coeff(new)
        return MultTensor(self.arity, acc)

    def __neg__(self):
        return MultTensor(self.arity, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultTensor):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        if scalar == 0:
            return MultTensor.zero(self.arity)
        return MultTensor(self.arity,
                          {k: _norm_coeff(v * scalar)
                           for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MultTensor):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def __repr__(self):
        return f"MultTensor(arity={self.arity}, {len(self.terms)} terms)"

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for slots, coeff in self.items_sorted():
            body = " (x) ".join(symbol_to_str(s) for s in slots)
            bits.append(f"{coeff} * {body}")
        return "  +  ".join(bits)

    # -- serialization -------------------------------------------------------

    def to_json_dict(self):
        return {
            "arity": self.arity,
            "terms": [
                {"coeff": _coeff_to_json(c),
                 "slots": [[symbol_to_str(s)] for s in slots]}
                for slots, c in self.items_sorted()
            ],
        }

    @classmethod
    def from_json_dict(cls, data):
        try:
            arity = int(data["arity"])
            raw = data["terms"]
        except (KeyError, TypeError) as exc:
            raise ContractViolation(f"bad tensor payload: {exc}") from exc
        pairs = []
        for t in raw:
            coeff = _coeff_from_json(t["coeff"])
            slots = []
            for slot in t["slots"]:
                if len(slot) != 1:
                    raise ContractViolation(
                        "canonical tensors have single-symbol slots")
                slots.append(parse_symbol(slot[0]))
            pairs.append((tuple(slots), coeff))
        return cls.from_terms(arity, pairs)


def equal(t1, t2):
    """Canonical equality with a strict arity contract."""
    if not isinstance(t1, MultTensor) or not isinstance(t2, MultTensor):
        raise ContractViolation("equal() compares MultTensor values")
    if t1.arity != t2.arity:
        raise ContractViolation(
            f"arity mismatch: {t1.arity} vs {t2.arity}")
    return t1.terms == t2.terms


def tensor_of_slots(slots, coeff=1):
    """Tensor of slot monomials, expanded by multi-additivity.

    Each slot is a sequence of (symbol, integer exponent) pairs; the slot
    a^2 b^-1 contributes 2a - b.  The result is the fully expanded
    canonical combination of single-symbol tensors.
    """
    from fractions import Fraction as _F

    norm = []
    for slot in slots:
        mono = [(sym, int(e)) for sym, e in slot]
        if not mono:
            raise ContractViolation("empty slot monomial")
        norm.append(mono)
    pairs = []
    for combo in product(*norm):
        c = coeff
        key = []
        for sym, e in combo:
            c = c * e
            key.append(sym)
        pairs.append((tuple(key), c))
    return MultTensor.from_terms(len(norm), pairs)


def alt(template, k):
    """Signed sum of template(perm) over all permutations of range(k).

    template maps a position permutation to a MultTensor; the result is
    sum sgn(perm) * template(perm), merged canonically.  No 1/k! factor.
    """
    acc = {}
    arity = None
    for perm, sgn in perms_with_signs(k):
        t = template(perm)
        if arity is None:
            arity = t.arity
        elif t.arity != arity:
            raise ContractViolation("template changed arity during alt")
        for slots, c in t.terms.items():
            acc[slots] = acc.get(slots, 0) + sgn * c
    if arity is None:
        raise ContractViolation("alt over an empty group")
    return MultTensor(arity,
                      {s: _norm_coeff(c) for s, c in acc.items() if c != 0})


def alt_pairs(template, p, q):
    """Independent alternation over two groups: sum over (sigma, tau) of
    sgn(sigma) sgn(tau) template(sigma, tau)."""
    acc = {}
    arity = None
    for ps, s1 in perms_with_signs(p):
        for qs, s2 in perms_with_signs(q):
            t = template(ps, qs)
            if arity is None:
                arity = t.arity
            elif t.arity != arity:
                raise ContractViolation("template changed arity during alt")
            for slots, c in t.terms.items():
                acc[slots] = acc.get(slots, 0) + s1 * s2 * c
    if arity is None:
        raise ContractViolation("alt over an empty group")
    return MultTensor(arity,
                      {s: _norm_coeff(c) for s, c in acc.items() if c != 0})


class WedgeTensor:
    """A tensor with one designated adjacent slot pair antisymmetrized.

    Stores `width` slot positions; the pair sits at 1-based positions
    (pair_index, pair_index + 1) and is kept with the two symbols in
    canonical sort order, absorbing the swap sign into the coefficient.
    Terms whose pair symbols coincide vanish.  Counting the wedge pair as
    one slot, the element has arity width - 1.
    """

    __slots__ = ("width", "pair_index", "terms")

    def __init__(self, width, pair_index, terms=None):
        width = int(width)
        pair_index = int(pair_index)
        if width < 2:
            raise ContractViolation("wedge tensor needs width >= 2")
        if not 1 <= pair_index <= width - 1:
            raise ContractViolation(
                f"pair index {pair_index} out of range for width {width}")
        object.__setattr__(self, "width", width)
        object.__setattr__(self, "pair_index", pair_index)
        object.__setattr__(self, "terms", dict(terms or {}))

    def __setattr__(self, name, value):
        raise AttributeError("WedgeTensor is immutable")

    @classmethod
    def from_terms(cls, width, pair_index, pairs):
        k = pair_index - 1
        acc = {}
        for slots, coeff in pairs:
            slots = tuple(slots)
            if len(slots) != width:
                raise ContractViolation(
                    f"term has {len(slots)} slots, expected {width}")
            a, b = slots[k], slots[k + 1]
            if a == b:
                continue
            if symbol_sort_key(a) > symbol_sort_key(b):
                a, b = b, a
                coeff = -coeff
            key = slots[:k] + (a, b) + slots[k + 2:]
            acc[key] = acc.get(key, 0) + coeff
        return cls(width, pair_index,
                   {s: _norm_coeff(c) for s, c in acc.items() if c != 0})

    @property
    def arity(self):
        return self.width - 1

    def is_zero(self):
        return not self.terms

    def items_sorted(self):
        return sorted(self.terms.items(),
                      key=lambda kv: tuple(symbol_sort_key(s) for s in kv[0]))

    def outer_groups(self):
        """Terms grouped by the symbols outside the wedge pair.

        Returns a sorted list of (outer_slots, [(a, b, coeff), ...]) where
        outer_slots is the tuple of non-pair slot symbols in position
        order.  The wedge of each group is an independent element, since
        distinct outer symbol tuples are independent group generators.
        """
        k = self.pair_index - 1
        groups = {}
        for slots, coeff in self.terms.items():
            outer = slots[:k] + slots[k + 2:]
            groups.setdefault(outer, []).append(
                (slots[k], slots[k + 1], coeff))
        out = []
        for outer in sorted(groups,
                            key=lambda t: tuple(symbol_sort_key(s)
                                                for s in t)):
            entries = sorted(groups[outer],
                             key=lambda e: (symbol_sort_key(e[0]),
                                            symbol_sort_key(e[1])))
            out.append((outer, entries))
        return out

    def __eq__(self, other):
        if not isinstance(other, WedgeTensor):
            return NotImplemented
        return (self.width == other.width
                and self.pair_index == other.pair_index
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.width, self.pair_index,
                     frozenset(self.terms.items())))

    def __repr__(self):
        return (f"WedgeTensor(width={self.width}, "
                f"pair_index={self.pair_index}, {len(self.terms)} terms)")

    def __str__(self):
        if not self.terms:
            return "0"
        k = self.pair_index - 1
        bits = []
        for slots, coeff in self.items_sorted():
            parts = []
            i = 0
            while i < self.width:
                if i == k:
                    parts.append(f"{symbol_to_str(slots[i])} ^ "
                                 f"{symbol_to_str(slots[i + 1])}")
                    i += 2
                else:
                    parts.append(symbol_to_str(slots[i]))
                    i += 1
            bits.append(f"{coeff} * " + " (x) ".join(parts))
        return "  +  ".join(bits)


def wedge_project(t, k):
    """Antisymmetrize slots (k, k+1) of a MultTensor into a WedgeTensor.

    This is the projection whose vanishing is the degree-k integrability
    condition of the element at the d log level.
    """
    if not isinstance(t, MultTensor):
        raise ContractViolation("wedge_project expects a MultTensor")
    if not 1 <= k <= t.arity - 1:
        raise ContractViolation(
            f"pair index {k} out of range for arity {t.arity}")
    return WedgeTensor.from_terms(t.arity, k, t.terms.items())
