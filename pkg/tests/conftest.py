import pytest

from rackoh.racks import (conjugation_rack, cyclic_rack, dihedral_rack,
                          symmetric_group_table, trivial_rack)


def corpus():
    out = [(f"trivial:{n}", trivial_rack(n)) for n in (1, 2, 3, 4)]
    out += [(f"dihedral:{n}", dihedral_rack(n)) for n in (3, 4, 5, 6)]
    out += [(f"cyclic:{n}", cyclic_rack(n)) for n in (3, 4, 5)]
    out.append(("conj:S3", conjugation_rack(symmetric_group_table(3))))
    return out


# orbit counts of the corpus racks, used by several theorem checks
ORBITS = {
    "trivial:1": 1, "trivial:2": 2, "trivial:3": 3, "trivial:4": 4,
    "dihedral:3": 1, "dihedral:4": 2, "dihedral:5": 1, "dihedral:6": 2,
    "cyclic:3": 1, "cyclic:4": 1, "cyclic:5": 1,
    "conj:S3": 3,
}

# reduced structure group orders
INNER_ORDERS = {
    "trivial:1": 1, "trivial:2": 1, "trivial:3": 1, "trivial:4": 1,
    "dihedral:3": 6, "dihedral:4": 4, "dihedral:5": 10, "dihedral:6": 6,
    "cyclic:3": 3, "cyclic:4": 4, "cyclic:5": 5,
    "conj:S3": 6,
}


@pytest.fixture(scope="session")
def corpus_list():
    return corpus()


@pytest.fixture(params=corpus(), ids=[spec for spec, _ in corpus()])
def corpus_rack(request):
    return request.param
