"""Shared generators for randomized tests."""

from nilspectrum.intmat import Matrix


def random_unimodular(rng, n, steps=8, shear=2):
    """Random element of GL_n(Z) as a product of elementary transforms."""
    grid = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        kind = rng.randrange(3)
        if kind == 0 and n > 1:
            i, j = rng.sample(range(n), 2)
            c = rng.randint(-shear, shear)
            grid[j] = [a + c * b for a, b in zip(grid[j], grid[i])]
        elif kind == 1 and n > 1:
            i, j = rng.sample(range(n), 2)
            grid[i], grid[j] = grid[j], grid[i]
        else:
            i = rng.randrange(n)
            grid[i] = [-a for a in grid[i]]
    return Matrix(grid)


def random_det_minus_one(rng, trace_bound=6, steps=6):
    """Random 2x2 integer matrix with det = -1 and 1 <= |trace| <= trace_bound."""
    flip = Matrix([[0, 1], [1, 0]])
    while True:
        m = random_unimodular(rng, 2, steps=steps, shear=1)
        a = m.entries
        det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
        if det == 1:
            m = m * flip
        tr = m.trace()
        if 1 <= abs(tr) <= trace_bound:
            return m
