from __future__ import annotations

from icfo.linfty.algebra import check_jacobi
from icfo.linfty.ce import ce_algebra, check_d_squared
from icfo.linfty.morphisms import check_morphism
from icfo.linfty.samples import random_chain_maps, random_perturbations, sl2, string_lie2
from icfo.linfty.tower import tower_morphism


def step_perturbations(count: int = 100) -> None:
    print("== jacobi vs d^2 ==")

    for base in (sl2(), string_lie2()):
        agree = lie = 0
        for L in random_perturbations(base, count, seed=0):
            jac = check_jacobi(L).ok
            sq = check_d_squared(ce_algebra(L)).ok
            agree += jac == sq
            lie += jac
        print(f"{base.name}: {agree}/{count} agree, {lie} still Lie")


def step_towers(count: int = 20) -> None:
    print("== towers ==")

    commuting = 0
    for phi in random_chain_maps(count, seed=0):
        if not check_morphism(phi).ok:
            print("not a morphism:", phi)
            continue
        commuting += tower_morphism(phi).commutes
    print(f"{commuting}/{count} ladders commute")


def main() -> None:
    step_perturbations()
    step_towers()


if __name__ == "__main__":
    main()
