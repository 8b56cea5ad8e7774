"""Words in the two boundary operators and the linear functional on them.

A word is a string over the alphabet {"d", "e"}; a word polynomial is a
finite rational combination of words.  The two rewriting moves are

* normal ordering: the leftmost "ed" factor rewrites via
      e d  ->  q^(-1) (d e)  -  q^(-1) (1 - q) * (pair deleted),
  which terminates in a combination of normal words d^i e^j;
* boundary elimination: a leading e or a trailing d is removed via
      e w  ->  (a + c) w - a c (d w)
      w d  ->  (b + d) w - b d (w e),
  which shortens words (at the price of possibly creating one new letter
  on the opposite side).

The functional itself is evaluated by normal ordering and summing bimoment
entries.  ``eval_by_elimination`` reaches the same values through the
boundary moves only, so the two routes are genuinely independent above the
shared boundary column seed.
"""

from __future__ import annotations

import random
import sys
from fractions import Fraction

from .bimoment import bimoment_table
from .core import (
    AWParams,
    InvalidParams,
    ShapeError,
    UnsupportedQ,
    as_rational,
)
from .reporting import VerificationReport

_LETTERS = frozenset("de")


def parse_word(text: str) -> str:
    """Validate and intern a word over {"d", "e"} (empty word allowed)."""
    if not isinstance(text, str):
        raise ShapeError(f"a word must be a string, got {type(text).__name__}")
    if not _LETTERS.issuperset(text):
        bad = sorted(set(text) - _LETTERS)
        raise ShapeError(f"word {text!r} uses letters outside d/e: {bad}")
    return sys.intern(text)


class WordPoly:
    """Rational linear combination of words, with no stored zero terms."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[str, Fraction] = {}
        if terms:
            for word, coeff in terms.items():
                coeff = as_rational(coeff)
                if coeff:
                    clean[parse_word(word)] = coeff
        self.terms = clean

    @classmethod
    def from_word(cls, word: str, coeff=1) -> "WordPoly":
        return cls({word: as_rational(coeff)})

    @classmethod
    def zero(cls) -> "WordPoly":
        return cls()

    @classmethod
    def one(cls) -> "WordPoly":
        return cls({"": Fraction(1)})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, WordPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, WordPoly):
            return NotImplemented
        out = dict(self.terms)
        for word, coeff in other.terms.items():
            acc = out.get(word, 0) + coeff
            if acc:
                out[word] = acc
            else:
                out.pop(word, None)
        result = WordPoly.__new__(WordPoly)
        result.terms = out
        return result

    def __neg__(self):
        result = WordPoly.__new__(WordPoly)
        result.terms = {w: -c for w, c in self.terms.items()}
        return result

    def __sub__(self, other):
        if not isinstance(other, WordPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, WordPoly):
            out: dict[str, Fraction] = {}
            for wa, ca in self.terms.items():
                for wb, cb in other.terms.items():
                    word = sys.intern(wa + wb)
                    acc = out.get(word, 0) + ca * cb
                    if acc:
                        out[word] = acc
                    else:
                        out.pop(word, None)
            result = WordPoly.__new__(WordPoly)
            result.terms = out
            return result
        coeff = as_rational(other)
        if not coeff:
            return WordPoly.zero()
        result = WordPoly.__new__(WordPoly)
        result.terms = {w: c * coeff for w, c in self.terms.items()}
        return result

    def __rmul__(self, other):
        if isinstance(other, WordPoly):
            return NotImplemented
        return self.__mul__(other)

    def max_len(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "WordPoly(0)"
        parts = [f"{c}*{w or '1'}" for w, c in sorted(self.terms.items())]
        return "WordPoly(" + " + ".join(parts) + ")"

    def to_json_list(self) -> list[dict]:
        return [
            {"word": word, "coeff": str(coeff)}
            for word, coeff in sorted(self.terms.items())
        ]

    @classmethod
    def from_json_list(cls, items) -> "WordPoly":
        out: dict[str, Fraction] = {}
        for item in items:
            word = parse_word(item["word"])
            out[word] = out.get(word, Fraction(0)) + as_rational(item["coeff"])
        return cls(out)


def is_normal(word: str) -> bool:
    """True iff every d precedes every e."""
    return "ed" not in word


def _split_normal(word: str) -> tuple[int, int]:
    cut = word.find("e")
    if cut < 0:
        return len(word), 0
    return cut, len(word) - cut


_NORMAL_CACHE: dict[tuple[str, Fraction], dict[str, Fraction]] = {}


def _normal_order_word(word: str, q: Fraction) -> dict[str, Fraction]:
    key = (word, q)
    cached = _NORMAL_CACHE.get(key)
    if cached is not None:
        return cached
    cut = word.find("ed")
    if cut < 0:
        result = {word: Fraction(1)}
    else:
        qinv = 1 / q
        drop_scale = -qinv * (1 - q)
        swapped = sys.intern(word[:cut] + "de" + word[cut + 2 :])
        dropped = sys.intern(word[:cut] + word[cut + 2 :])
        result = {}
        for w, c in _normal_order_word(swapped, q).items():
            result[w] = result.get(w, Fraction(0)) + qinv * c
        for w, c in _normal_order_word(dropped, q).items():
            acc = result.get(w, Fraction(0)) + drop_scale * c
            if acc:
                result[w] = acc
            else:
                result.pop(w, None)
    _NORMAL_CACHE[key] = result
    return result


def normal_order(wp: WordPoly, q) -> WordPoly:
    """Rewrite wp into an equal combination of normal words d^i e^j."""
    q = as_rational(q)
    if q == 0:
        raise UnsupportedQ("normal ordering divides by q; q = 0 is unsupported")
    out: dict[str, Fraction] = {}
    for word, coeff in wp.terms.items():
        for w, c in _normal_order_word(word, q).items():
            acc = out.get(w, Fraction(0)) + coeff * c
            if acc:
                out[w] = acc
            else:
                out.pop(w, None)
    result = WordPoly.__new__(WordPoly)
    result.terms = out
    return result


def functional(wp: WordPoly, p: AWParams) -> Fraction:
    """Value of the boundary functional: normal order, then sum moments."""
    table = bimoment_table(p)
    total = Fraction(0)
    for word, coeff in normal_order(wp, p.q).terms.items():
        i, j = _split_normal(word)
        total += coeff * table.entry(i, j)
    return total


def eliminate_left_e(wp: WordPoly, p: AWParams) -> WordPoly:
    """Apply  e w -> (a+c) w - ac (d w)  to every term.

    Every word in wp must begin with e; otherwise the rewrite is not an
    identity of the functional and a ShapeError is raised.
    """
    ac = p.a * p.c
    a_plus_c = p.a + p.c
    out = WordPoly.zero()
    for word, coeff in wp.terms.items():
        if not word.startswith("e"):
            raise ShapeError(f"word {word!r} does not begin with e")
        rest = word[1:]
        out += WordPoly({rest: coeff * a_plus_c}) + WordPoly({"d" + rest: -coeff * ac})
    return out


def eliminate_right_d(wp: WordPoly, p: AWParams) -> WordPoly:
    """Apply  w d -> (b+d) w - bd (w e)  to every term.

    Every word in wp must end with d.
    """
    bd = p.b * p.d
    b_plus_d = p.b + p.d
    out = WordPoly.zero()
    for word, coeff in wp.terms.items():
        if not word.endswith("d"):
            raise ShapeError(f"word {word!r} does not end with d")
        rest = word[:-1]
        out += WordPoly({rest: coeff * b_plus_d}) + WordPoly({rest + "e": -coeff * bd})
    return out


def eval_by_elimination(wp: WordPoly, p: AWParams) -> Fraction:
    """Evaluate the functional through boundary eliminations only.

    Strategy per word: strip a leading e if present, else strip a trailing
    d, else perform one normal-ordering step on the leftmost "ed".  Each
    move strictly decreases (length, inversion count) lexicographically, so
    the worklist terminates with normal words, which are read off the
    moment table.
    """
    a, b, c, d, q = p.a, p.b, p.c, p.d, p.q
    ac, bd = a * c, b * d
    qinv = 1 / q
    table = bimoment_table(p)

    total = Fraction(0)
    work: dict[str, Fraction] = dict(wp.terms)

    def push(word: str, coeff: Fraction):
        if not coeff:
            return
        acc = work.get(word, Fraction(0)) + coeff
        if acc:
            work[word] = acc
        else:
            work.pop(word, None)

    while work:
        word, coeff = work.popitem()
        if word.startswith("e"):
            rest = word[1:]
            push(rest, coeff * (a + c))
            push(sys.intern("d" + rest), -coeff * ac)
        elif word.endswith("d") and not is_normal(word):
            rest = word[:-1]
            push(rest, coeff * (b + d))
            push(sys.intern(rest + "e"), -coeff * bd)
        elif is_normal(word):
            i, j = _split_normal(word)
            total += coeff * table.entry(i, j)
        else:
            cut = word.find("ed")
            push(sys.intern(word[:cut] + "de" + word[cut + 2 :]), coeff * qinv)
            push(sys.intern(word[:cut] + word[cut + 2 :]), -coeff * qinv * (1 - q))
    return total


DEFAULT_FUZZ_SEED = 20240817


def _random_word(rng: random.Random, max_len: int) -> str:
    length = rng.randint(0, max_len)
    return "".join(rng.choice("de") for _ in range(length))


def check_defining_relations(
    p: AWParams,
    max_len: int = 8,
    trials: int = 200,
    seed: int = DEFAULT_FUZZ_SEED,
) -> VerificationReport:
    """Fuzz the three defining identities of the functional.

    For random words u, v of length <= max_len the functional must kill

        u (d e - q e d - (1-q)) v
        u (d + bd e - (b + d))
        (e + ac d - (a + c)) v

    exactly.  Each relation gets its own check entry with the first failing
    (u, v) as counterexample.
    """
    if max_len < 0 or trials <= 0:
        raise InvalidParams("max_len must be >= 0 and trials > 0")
    q = p.q
    ac, bd = p.a * p.c, p.b * p.d
    report = VerificationReport(params=p.to_map(), n=max_len)
    rng = random.Random(seed)

    relations = {
        "bulk-exchange": lambda u, v: (
            WordPoly({u + "de" + v: 1})
            + WordPoly({u + "ed" + v: -q})
            + WordPoly({u + v: -(1 - q)})
        ),
        "right-boundary": lambda u, v: (
            WordPoly({u + "d": 1}) + WordPoly({u + "e": bd}) + WordPoly({u: -(p.b + p.d)})
        ),
        "left-boundary": lambda u, v: (
            WordPoly({"e" + v: 1}) + WordPoly({"d" + v: ac}) + WordPoly({v: -(p.a + p.c)})
        ),
    }

    samples = [
        (_random_word(rng, max_len), _random_word(rng, max_len)) for _ in range(trials)
    ]
    for name, build in relations.items():
        failure = None
        with report.timed(name):
            for u, v in samples:
                value = functional(build(u, v), p)
                if value != 0:
                    failure = {"u": u, "v": v, "value": value}
                    break
        report.add(name, failure is None, failure)
    return report
