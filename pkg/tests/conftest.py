import numpy as np
import pytest

from algebra.cohomology import CoefficientModule, Cochain
from algebra.groups import Automorphism, homomorphisms
from algebra.kernels import kernel_from_action, make_kernel
from catalog import named_group


@pytest.fixture(scope="session")
def groups():
    """Small catalog groups shared by every test."""
    return {name: named_group(name) for name in ("C1", "C2", "C3", "C4", "V4", "S3", "D4", "Q8", "C2xC4")}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def inversion(group):
    return Automorphism(group, group.inverses)


def inversion_action(G, N):
    """G acting on abelian N through the first nontrivial map G -> C2, by inversion."""
    C2 = named_group("C2")
    sign = next(h for h in homomorphisms(G, C2) if h.image.any())
    return [inversion(N) if sign(g) else Automorphism.identity(N) for g in range(G.order)]


def trivial_kernel(G, N):
    return make_kernel(G, N, [0] * G.order)


def inversion_kernel(G, N):
    return kernel_from_action(G, N, inversion_action(G, N))


def trivial_module(A, G):
    return CoefficientModule.trivial(A, G)


def random_cochain(module, degree, rng):
    values = rng.integers(0, module.order, size=(module.actor.order,) * degree)
    for axis in range(degree):
        index = [slice(None)] * degree
        index[axis] = 0
        values[tuple(index)] = 0
    return Cochain(degree, module.actor, module, values)


def q8_swap(Q8):
    """i <-> j, k -> -k"""
    return Automorphism(Q8, [0, 1, 4, 5, 2, 3, 7, 6])


def q8_swap_kernel(C2, Q8):
    return kernel_from_action(C2, Q8, [Automorphism.identity(Q8), q8_swap(Q8)])
