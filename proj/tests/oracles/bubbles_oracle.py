"""Brute-force cubical Euler characteristics and voxel counts for the
bubble fixtures in tests/test_bubbles.cpp.

A vertex, edge or face of the grid belongs to the complex when any voxel
touching it is marked; chi = V - E + F - C.
"""
import numpy as np


def chi(mask):
    m = np.pad(mask.astype(bool), 1)
    n0, n1, n2 = m.shape
    C = int(m.sum())
    # Face normal to axis a between voxels v and v + e_a.
    F = 0
    for a in range(3):
        sl0 = [slice(None)] * 3
        sl1 = [slice(None)] * 3
        sl0[a] = slice(0, -1)
        sl1[a] = slice(1, None)
        F += int((m[tuple(sl0)] | m[tuple(sl1)]).sum())
    # Edge along axis a touches the four voxels around it in the other two axes.
    E = 0
    for a in range(3):
        b, c = [x for x in range(3) if x != a]
        acc = None
        for db in (0, 1):
            for dc in (0, 1):
                sl = [slice(None)] * 3
                sl[b] = slice(db, m.shape[b] - 1 + db)
                sl[c] = slice(dc, m.shape[c] - 1 + dc)
                part = m[tuple(sl)]
                acc = part if acc is None else (acc | part)
        E += int(acc.sum())
    acc = None
    for d0 in (0, 1):
        for d1 in (0, 1):
            for d2 in (0, 1):
                part = m[d0:n0 - 1 + d0, d1:n1 - 1 + d1, d2:n2 - 1 + d2]
                acc = part if acc is None else (acc | part)
    V = int(acc.sum())
    return V - E + F - C


def ball(n, c, r):
    i, j, k = np.indices((n, n, n))
    return (i - c[0]) ** 2 + (j - c[1]) ** 2 + (k - c[2]) ** 2 <= r * r


def torus(n, c, R, r):
    i, j, k = np.indices((n, n, n)).astype(float)
    x, y, z = i - c[0], j - c[1], k - c[2]
    return (np.sqrt(x * x + y * y) - R) ** 2 + z * z <= r * r


def shell(n, c, r_in, r_out):
    return ball(n, c, r_out) & ~ball(n, c, r_in)


if __name__ == "__main__":
    one = np.zeros((3, 3, 3), bool)
    one[1, 1, 1] = True
    print("single voxel chi", chi(one))
    b = ball(32, (15.5, 15.5, 15.5), 10)
    print("ball r=10 voxels", int(b.sum()), "chi", chi(b))
    t = torus(40, (19.5, 19.5, 19.5), 10, 4)
    print("torus R=10 r=4 voxels", int(t.sum()), "chi", chi(t))
    s = shell(32, (15.5, 15.5, 15.5), 6, 10)
    print("shell 6..10 voxels", int(s.sum()), "chi", chi(s))
    # two balls of radius 0.15 in a 61^3 unit grid, centres (0.3,..) and (0.7,..)
    n = 61
    dx = 1.0 / (n - 1)
    i, j, k = np.indices((n, n, n)) * dx
    two = ((i - 0.3) ** 2 + (j - 0.3) ** 2 + (k - 0.3) ** 2 < 0.15 ** 2) | (
        (i - 0.7) ** 2 + (j - 0.7) ** 2 + (k - 0.7) ** 2 < 0.15 ** 2)
    print("two balls voxels", int(two.sum()), "each exact", 4 / 3 * np.pi * 0.15 ** 3 / dx ** 3)
