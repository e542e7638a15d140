import random

import pytest
import sympy

from corank.laurent import LaurentMatrix, LaurentPoly, parse_poly
from corank.pipeline import load_presentation

SEED = 20240531


@pytest.fixture
def rng():
    return random.Random(SEED)


def P(text, variables=("a", "c"), modulus=0):
    return parse_poly(text, variables, modulus)


def M(rows, variables=("a", "c"), modulus=0):
    return LaurentMatrix.from_strings(rows, variables, modulus)


def to_sympy(p: LaurentPoly):
    syms = sympy.symbols(p.variables) if p.variables else ()
    expr = sympy.Integer(0)
    for exps, c in p.terms.items():
        term = sympy.Integer(c)
        for s, e in zip(syms, exps):
            term *= s ** e
        expr += term
    return sympy.expand(expr)


def random_poly(rng, variables=("a", "c"), nterms=4, lo=-2, hi=2, coeff=5, modulus=0):
    terms = {}
    for _ in range(nterms):
        e = tuple(rng.randint(lo, hi) for _ in variables)
        terms[e] = terms.get(e, 0) + rng.randint(-coeff, coeff)
    return LaurentPoly(terms, variables, modulus)


def random_unit(rng, variables=("a", "c"), modulus=0):
    e = tuple(rng.randint(-2, 2) for _ in variables)
    return LaurentPoly.monomial(e, rng.choice([1, -1]), variables, modulus)


@pytest.fixture(scope="session")
def tripus():
    return load_presentation("tripus.pres")


@pytest.fixture(scope="session")
def genus3():
    return load_presentation("genus3.pres")
