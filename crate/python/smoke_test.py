"""Quick end-to-end check of the ggp extension module."""

import ggp


def main():
    tower = ggp.FieldTower(3)
    assert tower.q == 3
    assert tower.mult_order(2) == 8 and tower.mult_order(4) == 80

    shapes = ggp.TorusShape.all(2)
    assert sorted(s.lambda_ for s in shapes) == [[0, 1], [2]]

    split = ggp.TorusShape(2, [2])
    assert split.weyl_order() == 2
    assert ggp.unipotent_multiplicity(split) == 1
    assert ggp.unipotent_multiplicity(ggp.TorusShape(2, [0, 1])) == -1

    chi = ggp.TorusCharacter(3, split, [1, 2])
    assert chi.is_regular()
    reg = chi.regular_multiplicity()
    assert reg["signed"] == reg["closed_form_signed"] == chi.general_multiplicity()

    oracle = ggp.Oracle(3, 2)
    assert oracle.group_order() == 3 * 4 * 8
    assert oracle.rank_convention() == "kprime"
    assert oracle.multiplicity(chi) == reg["signed"]
    assert oracle.multiplicity(chi, psi=2, delta="alternate") == reg["signed"]

    rows = oracle.sweep(split, dedup_orbits=True)
    regular = [r for r in rows if r["regular"]]
    assert regular and all(r["agree"] for r in regular)

    coefficient, radicand = ggp.multiplicity_bound(2)
    assert (coefficient, radicand) == (8, 2)

    results = ggp.verify("combinatorics", nmax=4)
    assert [r["id"] for r in results] == ["A8"] and results[0]["passed"]

    try:
        ggp.TorusShape(2, [1])
    except ValueError:
        pass
    else:
        raise AssertionError("bad shape accepted")

    print(f"ok: {len(rows)} orbit rows, {len(regular)} regular, all agree")


if __name__ == "__main__":
    main()
