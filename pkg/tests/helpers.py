"""Independent checks shared by the test modules."""

from knotdimer import enumerate_matchings


def perm_sign(perm):
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def matching_signs(g, eps):
    """sign(permutation) * eps(matching) over all coverings of ``g``.

    A weighting is Kasteleyn exactly when this set has one element, which
    is checked here straight from the determinant expansion.
    """
    row = {x: i for i, x in enumerate(g.crossings)}
    col = {f: j for j, f in enumerate(g.faces)}
    out = set()
    for m in enumerate_matchings(g):
        perm = [0] * len(m)
        s = 1
        for x, f in m:
            perm[row[x]] = col[f]
            s *= eps[(x, f)]
        out.add(perm_sign(perm) * s)
    return out


def adjacent_or_cofacial_pairs(g):
    for v in g.crossings:
        for w in g.faces:
            if g.has_edge(v, w) or g.on_common_face(("c", v), ("f", w)):
                yield v, w
