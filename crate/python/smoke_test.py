"""Exercises the Python bindings end to end. Run after installing the
extension: python python/smoke_test.py"""

import json

import foliation_kit as fk


def main():
    ctx = fk.Context()
    w = ctx.parse("x2*x3*d(x1) + x1*x3*d(x2) - x1*x2*d(x3)")
    x = ctx.parse("diag(1, 2, 3)")
    assert isinstance(w, fk.Form) and w.degree == 1
    assert x.is_tangent(w)
    assert w.is_integrable()
    assert (w ^ w.d()).is_zero()

    one, two, three = (ctx.parse(s) for s in ("1", "2", "3"))
    assert x.linear_part() == [one, two, three]
    law = fk.blowup_eigenvalues([one, two, three], 1)
    assert [str(c) for c in law] == ["1", "1", "2"]
    # (1, 2, 3) spans a line over Q, so the relations form a rank 2 lattice
    relations = [[int(m) for m in r] for r in fk.strong_resonances([one, two, three])]
    assert len(relations) == 2
    assert all(r[0] + 2 * r[1] + 3 * r[2] == 0 for r in relations)

    # a strongly non-resonant triple over Q(sqrt 2 + sqrt 3)
    k = fk.Context("t: t^4 - 10*t^2 + 1")
    a = [k.parse(s) for s in ("1", "t", "t^2")]
    assert fk.is_strongly_diagonalizable(a)
    p = fk.tangent_log_pencil(a)
    xa = fk.VectorField.diagonal(a)
    assert xa.is_tangent(p.gen1) and xa.is_tangent(p.gen2)
    theta = p.theta
    assert p.gen1.d() == theta ^ p.gen1
    name, data = p.classify()
    assert name in {"FlatHolomorphicFirstIntegral", "FlatMeromorphic", "ConstantCurvatureFactor",
                    "NonconstantCurvatureFactor"}, name

    xj, wj = fk.jouanolou(2)
    assert xj.ip(wj).is_zero() and wj.is_integrable()
    surfaces, complete = xj.invariant_surfaces(2)
    assert surfaces == [] and complete

    f = ctx.parse("(x1 + x2)*(x1 - x3)")
    g = ctx.parse("(x1 + x2)*x3")
    assert f.gcd(g) == ctx.parse("x1 + x2")

    try:
        fk.Pencil(ctx.parse("d(x1)"), ctx.parse("d(x1)"))
    except fk.PreconditionError:
        pass
    else:
        raise AssertionError("dependent generators accepted")

    code, out = fk.run_script("field Q;\ncheck-integrable d(x1) --expect true;\n", json=True)
    report = json.loads(out)
    assert code == 0 and report["schema_version"] == fk.SCHEMA_VERSION
    assert report["results"][0]["verdict"] == "true"
    print("smoke test ok:", name, len(data), "certificates")


if __name__ == "__main__":
    main()
