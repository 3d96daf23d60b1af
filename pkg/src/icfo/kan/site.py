"""
The site of finite sets with surjective covers. Surjection, epimorphism and
local surjection are separate tests here so that their agreement can be checked.
"""
from __future__ import annotations

import numpy as np

from icfo.simplicial.constructions import pushout
from icfo.simplicial.core import SimplicialMorphism


def is_cover(f: SimplicialMorphism) -> bool:
    return f.is_surjective()


def is_epimorphism(f: SimplicialMorphism) -> bool:
    """f is epi iff the two legs of its cokernel pair Y u_X Y agree."""
    po = pushout(f, f)
    return all(np.array_equal(a, b) for a, b in zip(po.left.components, po.right.components))


def is_local_surjection(f: SimplicialMorphism) -> bool:
    """Every fibre over every simplex of the target is inhabited."""
    return all(
        bool((np.bincount(f.components[m], minlength=f.target.sizes[m]) > 0).all()) for m in range(f.cap + 1)
    )


def is_stalkwise_surjection(f: SimplicialMorphism) -> bool:
    # the underlying-set functor is the only point
    return is_local_surjection(f)
