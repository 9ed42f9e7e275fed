"""Quick check of the ffnets_py extension module."""

import ffnets_py as ff

k = ff.Field(4)
assert (k.size, k.characteristic, k.degree) == (4, 2, 2)
assert all(k.mul(a, k.inv(a)) == 1 for a in range(1, 4))
assert ff.Field("3^2").size == 9

ms = ff.construct("variant=genus0 q=2 s=2", rows=8, cols=8)
assert (ms.s, ms.rows, ms.cols) == (2, 8, 8)
assert ms.matrix(1)[1][:3] == [1, 1, 0]
assert all(t == 0 for _, t, _ in ms.check_bound(8))
assert ms.point(1, 3) == [7, 7]
assert all(ok for _, ok in ms.netcheck(4, 0))

back = ff.MatrixSet.deserialize(ms.serialize())
assert back.digest() == ms.digest()
try:
    ff.MatrixSet.deserialize(ms.serialize().replace("\n1 1 0 0", "\n1 1 1 0", 1))
except ValueError as e:
    assert "digest mismatch" in str(e)
else:
    raise AssertionError("tampered file accepted")

xs = ff.construct("variant=xing backend=curve:0,0,0,2,0 q=3 s=3", rows=6, cols=6)
assert xs.genus == 1
assert all(t <= b for _, t, b in xs.check_bound(6))

assert ff.expand("1/(1-x)", "x", upto=3) == [(0, [1]), (1, [1]), (2, [1]), (3, [1])]
print(ff.resolve_params("variant=genus0 q=2 s=2"))
print("smoke test ok")
