import pytest

# Example formula used throughout: forall u,w exists x,y.
#   (u -> ((not w <-> x) and (w <-> y))) and (not u -> ((w <-> x) and (not w <-> y)))
# The value is TRUE: the inner player can always mirror the outer move.
MIRROR_QCIR = """\
#QCIR-G14
forall(u, w)
exists(x, y)
output(phi)
a1 = xor(w, x)
a2 = xor(w, y)
b1 = and(a1, -a2)
b2 = and(-a1, a2)
i1 = or(-u, b1)
i2 = or(u, b2)
phi = and(i1, i2)
"""


@pytest.fixture
def mirror_qcir() -> str:
    return MIRROR_QCIR
