"""Scissor-congruence generators, their coproduct, and tensor expansion.

The weight-k group is generated by pairs of simplices <prefix | L; M>
where L and M are (k+1)-tuples of abstract vector labels and the prefix is
a (possibly empty) set of projection centers: the generator of the
configuration obtained by projecting everything from those centers.
Canonical form sorts L and M, absorbing the sign of the sorting
permutations into the coefficient (skew-symmetry is an exact relation of
these groups, not a mod-2 one), and sorts the prefix, whose order carries
no sign because projections commute.  A repeated label inside L or inside
M makes the generator zero by skew-symmetry; a label shared with the
prefix degenerates the simplex and also gives zero.

Expressions are linear combinations of factor tuples, each factor either a
generator or a multiplicative monomial of bracket symbols.  The coproduct
of a generator lands in such two-factor expressions, with the factor order
exactly as in the coproduct formulas:

* weight 2 (both summand orders appear):
    -(1/8) Alt_{3,3}[ D(p,m0,l1,l2) (x) <p,m0 | l1,l2; m1,m2>
                     + <p,l0 | l1,l2; m1,m2> (x) D(p,l0,m1,m2) ]
  where Alt_{3,3} alternates (l0,l1,l2) and (m0,m1,m2) independently and p
  is the inherited prefix.

* weight w >= 3 (generator left, bracket right):
    - sum_{i,j} (-1)^(i+j) <p,l_i | L\\l_i; M\\m_j> (x) D(p, l_i, M\\m_j)

Iterating the coproduct on the leftmost reducible factor and then turning
every weight-1 generator into its projected cross-ratio monomial

    <p | l0,l1; m0,m1>  ->  D(p,l0,m0) D(p,l1,m1) / (D(p,l1,m0) D(p,l0,m1))

expands an expression into a canonical MultTensor.  That composite is the
maximal iterated coproduct of the coalgebra, realized purely in terms of
the (w-1,1) components.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ContractViolation, DegeneracyError
from .tensors import (MultTensor, bracket_symbol, parse_symbol,
                      perms_with_signs, symbol_to_str, tensor_of_slots,
                      _coeff_from_json, _coeff_to_json, _norm_coeff)

GEN = "g"
MONO = "m"


@dataclass(frozen=True)
class AomotoGen:
    """Canonical simplex-pair generator <prefix | left; right>."""

    prefix: tuple
    left: tuple
    right: tuple

    @property
    def weight(self):
        return len(self.left) - 1

    def __str__(self):
        pre = ",".join(str(i) for i in self.prefix)
        l = ",".join(str(i) for i in self.left)
        r = ",".join(str(i) for i in self.right)
        return f"A_{self.weight}[{pre}|{l};{r}]"


def _sort_with_sign(seq):
    lst = list(seq)
    inv = 0
    for a in range(len(lst)):
        for b in range(a + 1, len(lst)):
            if lst[a] > lst[b]:
                inv += 1
    return tuple(sorted(lst)), (-1 if inv % 2 else 1)


def make_gen(prefix, left, right):
    """Canonicalize a generator; returns (gen, sign) or (None, 0).

    None means the generator vanishes: a repeated label within left or
    right (skew-symmetry), or a simplex label equal to a projection center
    (degenerate simplex in the quotient).
    """
    prefix = tuple(int(i) for i in prefix)
    left = tuple(int(i) for i in left)
    right = tuple(int(i) for i in right)
    if len(left) != len(right):
        raise ContractViolation(
            f"simplices must have equal size, got {len(left)} and {len(right)}")
    if len(left) < 2:
        raise ContractViolation("simplices need at least 2 labels")
    if len(set(left)) != len(left) or len(set(right)) != len(right):
        return None, 0
    pset = set(prefix)
    if len(pset) != len(prefix):
        return None, 0
    if pset & (set(left) | set(right)):
        return None, 0
    ls, s1 = _sort_with_sign(left)
    rs, s2 = _sort_with_sign(right)
    return AomotoGen(tuple(sorted(prefix)), ls, rs), s1 * s2


def gen_to_str(gen):
    return str(gen)


_GEN_HEAD = "A_"


def parse_gen(s):
    s = s.strip()
    if not s.startswith(_GEN_HEAD):
        raise ContractViolation(f"not a generator string: {s!r}")
    lb = s.index("[")
    if not s.endswith("]"):
        raise ContractViolation(f"not a generator string: {s!r}")
    body = s[lb + 1:-1]
    pre_part, rest = body.split("|", 1)
    l_part, r_part = rest.split(";", 1)

    def ints(part):
        part = part.strip()
        if not part:
            return ()
        return tuple(int(p) for p in part.split(","))

    gen, sign = make_gen(ints(pre_part), ints(l_part), ints(r_part))
    if gen is None:
        raise ContractViolation(f"degenerate generator string: {s!r}")
    if sign != 1:
        raise ContractViolation(f"non-canonical generator string: {s!r}")
    return gen


class AomotoExpr:
    """Linear combination of factor tuples (generators and monomials)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        object.__setattr__(self, "terms", dict(terms or {}))

    def __setattr__(self, name, value):
        raise AttributeError("AomotoExpr is immutable")

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def from_terms(cls, pairs):
        acc = {}
        for factors, coeff in pairs:
            key = tuple(factors)
            for f in key:
                if f[0] not in (GEN, MONO):
                    raise ContractViolation(f"bad factor tag {f[0]!r}")
            acc[key] = acc.get(key, 0) + coeff
        return cls({k: _norm_coeff(v) for k, v in acc.items() if v != 0})

    @classmethod
    def of_gen(cls, gen, coeff=1):
        return cls.from_terms([(((GEN, gen),), coeff)])

    @property
    def term_count(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, AomotoExpr):
            return NotImplemented
        acc = dict(self.terms)
        for k, v in other.terms.items():
            new = acc.get(k, 0) + v
            if new == 0:
                acc.pop(k, None)
            else:
                acc[k] = _norm_coeff(new)
        return AomotoExpr(acc)

    def __neg__(self):
        return AomotoExpr({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, AomotoExpr):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        if scalar == 0:
            return AomotoExpr.zero()
        return AomotoExpr({k: _norm_coeff(v * scalar)
                           for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AomotoExpr):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        return f"AomotoExpr({len(self.terms)} terms)"

    @staticmethod
    def _factor_strs(factors):
        out = []
        for tag, payload in factors:
            if tag == GEN:
                out.append(gen_to_str(payload))
            else:
                for sym, e in payload:
                    out.append(symbol_to_str(sym)
                               + (f"^{e}" if e != 1 else ""))
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for factors, coeff in sorted(self.terms.items(), key=repr):
            bits.append(f"{coeff} * "
                        + " (x) ".join(self._factor_strs(factors)))
        return "  +  ".join(bits)

    # -- serialization (mirrors the tensor wire format) ---------------------

    def to_json_dict(self):
        def slot_strs(factor):
            tag, payload = factor
            if tag == GEN:
                return [gen_to_str(payload)]
            out = []
            for sym, e in payload:
                out.append(symbol_to_str(sym) + (f"^{e}" if e != 1 else ""))
            return out

        terms = []
        for factors, coeff in sorted(self.terms.items(), key=repr):
            terms.append({"coeff": _coeff_to_json(coeff),
                          "slots": [slot_strs(f) for f in factors]})
        return {"arity": None if not self.terms else
                len(next(iter(self.terms))), "terms": terms}

    @classmethod
    def from_json_dict(cls, data):
        pairs = []
        for t in data["terms"]:
            coeff = _coeff_from_json(t["coeff"])
            factors = []
            for slot in t["slots"]:
                if len(slot) == 1 and slot[0].startswith(_GEN_HEAD):
                    factors.append((GEN, parse_gen(slot[0])))
                else:
                    mono = []
                    for atom in slot:
                        if "^" in atom:
                            sym_s, e_s = atom.rsplit("^", 1)
                            mono.append((parse_symbol(sym_s), int(e_s)))
                        else:
                            mono.append((parse_symbol(atom), 1))
                    factors.append((MONO, tuple(mono)))
            pairs.append((tuple(factors), coeff))
        return cls.from_terms(pairs)


def _mono(*signed_brackets):
    """Monomial factor from (labels, exponent) pairs, mod-2 canonical."""
    out = []
    for labels, e in signed_brackets:
        sym, _ = bracket_symbol(labels)
        out.append((sym, e))
    return (MONO, tuple(out))


@lru_cache(maxsize=None)
def coproduct_weight2(gen):
    """Coproduct of a weight-2 generator into weight-1 (x) bracket terms.

    Both tensor orders appear, exactly as in the defining formula: the
    first summand carries the bracket in the left slot, the second in the
    right slot.  The overall coefficient is -1/8 in front of the double
    alternation over the two simplices.
    """
    if not isinstance(gen, AomotoGen):
        raise ContractViolation("coproduct_weight2 expects a generator")
    if gen.weight != 2:
        raise ContractViolation(
            f"coproduct_weight2 needs weight 2, got {gen.weight}")
    p = gen.prefix
    L, M = gen.left, gen.right
    c = Fraction(-1, 8)
    pairs = []
    for ps, s1 in perms_with_signs(3):
        l0, l1, l2 = (L[i] for i in ps)
        for qs, s2 in perms_with_signs(3):
            m0, m1, m2 = (M[j] for j in qs)
            sgn = s1 * s2
            # D(p, m0, l1, l2) (x) <p,m0 | l1,l2; m1,m2>
            g1, gs1 = make_gen(p + (m0,), (l1, l2), (m1, m2))
            if g1 is not None:
                pairs.append((
                    (_mono((p + (m0, l1, l2), 1)), (GEN, g1)),
                    c * sgn * gs1))
            # <p,l0 | l1,l2; m1,m2> (x) D(p, l0, m1, m2)
            g2, gs2 = make_gen(p + (l0,), (l1, l2), (m1, m2))
            if g2 is not None:
                pairs.append((
                    ((GEN, g2), _mono((p + (l0, m1, m2), 1))),
                    c * sgn * gs2))
    return AomotoExpr.from_terms(pairs)


@lru_cache(maxsize=None)
def coproduct_higher(gen):
    """Coproduct component of a generator of weight >= 3 into
    weight-(w-1) (x) bracket terms, generator in the left slot."""
    if not isinstance(gen, AomotoGen):
        raise ContractViolation("coproduct_higher expects a generator")
    w = gen.weight
    if w < 3:
        raise ContractViolation(
            f"coproduct_higher needs weight >= 3, got {w}")
    p = gen.prefix
    L, M = gen.left, gen.right
    pairs = []
    for i, li in enumerate(L):
        lrest = L[:i] + L[i + 1:]
        for j in range(len(M)):
            mrest = M[:j] + M[j + 1:]
            g, gs = make_gen(p + (li,), lrest, mrest)
            if g is None:
                continue
            sgn = -1 if (i + j) % 2 else 1
            pairs.append((
                ((GEN, g), _mono((p + (li,) + mrest, 1))),
                -sgn * gs))
    return AomotoExpr.from_terms(pairs)


def coproduct(gen):
    """Weight-graded coproduct component (w-1, 1) of a generator."""
    if not isinstance(gen, AomotoGen):
        raise ContractViolation("coproduct expects a generator")
    if gen.weight == 2:
        return coproduct_weight2(gen)
    if gen.weight >= 3:
        return coproduct_higher(gen)
    raise ContractViolation("weight-1 generators have no reduced coproduct")


@lru_cache(maxsize=None)
def cross_ratio_monomial(gen):
    """The multiplicative monomial of a weight-1 generator.

    <p | l0,l1; m0,m1> maps to the projected cross-ratio
    D(p,l0,m0) D(p,l1,m1) / (D(p,l1,m0) D(p,l0,m1)), returned as a slot
    monomial of four bracket symbols with exponents +-1.
    """
    if not isinstance(gen, AomotoGen):
        raise ContractViolation("cross_ratio_monomial expects a generator")
    if gen.weight != 1:
        raise ContractViolation(
            f"cross_ratio_monomial needs weight 1, got {gen.weight}")
    p = gen.prefix
    (l0, l1), (m0, m1) = gen.left, gen.right
    return _mono((p + (l0, m0), 1), (p + (l1, m1), 1),
                 (p + (l1, m0), -1), (p + (l0, m1), -1))[1]


def expand_to_tensor(expr, arity):
    """Expand an expression into a canonical MultTensor of given arity.

    Repeatedly applies the coproduct to the leftmost factor holding a
    generator of weight >= 2 (splicing the two-factor image in place),
    converts the surviving weight-1 generators to cross-ratio monomials,
    and expands all slot monomials multi-additively.  A term whose final
    factor count differs from `arity` is a contract violation: the
    expression was not reducible to the requested depth.
    """
    if isinstance(expr, AomotoGen):
        expr = AomotoExpr.of_gen(expr)
    if not isinstance(expr, AomotoExpr):
        raise ContractViolation("expand_to_tensor expects an expression")
    arity = int(arity)
    acc = {}
    stack = list(expr.terms.items())
    while stack:
        factors, coeff = stack.pop()
        idx = None
        for i, f in enumerate(factors):
            if f[0] == GEN and f[1].weight >= 2:
                idx = i
                break
        if idx is not None:
            cp = coproduct(factors[idx][1])
            head, tail = factors[:idx], factors[idx + 1:]
            for cf, cc in cp.terms.items():
                stack.append((head + cf + tail, coeff * cc))
            continue
        slots = []
        for tag, payload in factors:
            if tag == GEN:
                slots.append(cross_ratio_monomial(payload))
            else:
                slots.append(payload)
        if len(slots) != arity:
            raise ContractViolation(
                f"term reduced to {len(slots)} slots, expected {arity}")
        for combo_key, combo_coeff in _expand_slots(slots):
            c = coeff * combo_coeff
            acc[combo_key] = acc.get(combo_key, 0) + c
    return MultTensor(arity,
                      {k: _norm_coeff(v) for k, v in acc.items() if v != 0})


def _expand_slots(slots):
    """Cartesian multi-additive expansion of slot monomials."""
    keys = [((), 1)]
    for mono in slots:
        nxt = []
        for prefix_syms, c in keys:
            for sym, e in mono:
                nxt.append((prefix_syms + (sym,), c * e))
        keys = nxt
    return keys


def additivity_residue(weight, dual=False, side="left"):
    """Tensor expansion of a simplex-addition alternating sum.

    The pool of labels 1..weight+2 fills one simplex of a weight-`weight`
    generator, each summand omitting one pool label with an alternating
    sign; the other simplex is fixed at labels weight+3..2*weight+3.
    side selects which simplex takes the pool.  With dual=True the omitted
    label is prepended as a projection center instead of being dropped.
    All four sums (two sides, plain and dual) are relations of the
    generator groups, so their depth-`weight` expansions must be the zero
    tensor; the returned MultTensor is that expansion.
    """
    weight = int(weight)
    if weight < 2:
        raise ContractViolation("additivity expansion needs weight >= 2")
    if side not in ("left", "right"):
        raise ContractViolation(f"side must be left or right, got {side!r}")
    pool = tuple(range(1, weight + 3))
    fixed = tuple(range(weight + 3, 2 * weight + 4))
    pairs = []
    for i, omitted in enumerate(pool):
        rest = pool[:i] + pool[i + 1:]
        prefix = (omitted,) if dual else ()
        if side == "left":
            gen, gs = make_gen(prefix, rest, fixed)
        else:
            gen, gs = make_gen(prefix, fixed, rest)
        if gen is None:
            continue
        sign = -1 if i % 2 else 1
        pairs.append((((GEN, gen),), sign * gs))
    return expand_to_tensor(AomotoExpr.from_terms(pairs), weight)


def pairing_element_labels(n, labels=None, prefix=()):
    """Alternated simplex-pair element over 2n labels.

    Alt over all arrangements (x1..x2n) of the labels of
    <prefix | x1..xn; x(n+1)..x2n>  (x)  D(prefix, x(n+1), ..., x(2n)),
    a weight-(n-1) expression whose tensor expansion of depth n matches a
    multiple of the sliding-window bracket element; see elements.py.
    """
    n = int(n)
    if n < 2:
        raise ContractViolation("pairing element needs n >= 2")
    if labels is None:
        labels = tuple(range(1, 2 * n + 1))
    labels = tuple(int(i) for i in labels)
    if len(labels) != 2 * n:
        raise ContractViolation(f"need 2n = {2*n} labels, got {len(labels)}")
    if len(set(labels)) != len(labels):
        raise ContractViolation("labels must be distinct")
    prefix = tuple(int(i) for i in prefix)
    acc = {}
    for perm, sgn in perms_with_signs(2 * n):
        arr = [labels[p] for p in perm]
        gen, gs = make_gen(prefix, arr[:n], arr[n:])
        if gen is None:
            continue
        sym, _ = bracket_symbol(prefix + tuple(arr[n:]))
        key = ((GEN, gen), (MONO, ((sym, 1),)))
        acc[key] = acc.get(key, 0) + sgn * gs
    return AomotoExpr({k: v for k, v in acc.items() if v != 0})


def pairing_element(config):
    """Validated form of pairing_element_labels for a concrete generic
    configuration of 2n vectors in dimension n, labelled 1..2n."""
    from .configurations import Configuration

    if not isinstance(config, Configuration):
        raise ContractViolation("pairing_element expects a Configuration")
    n = config.dim
    if len(config) != 2 * n:
        raise ContractViolation(
            f"need 2n = {2*n} vectors in dimension {n}, got {len(config)}")
    cert = config.is_generic()
    if not cert:
        raise DegeneracyError(
            f"configuration is not generic: subset {cert.failing_subset}")
    return pairing_element_labels(n)
