"""ffperm command line: construct, verify and invert the permutation families.

Field elements are passed and printed as canonical indices.  Every command
prints one JSON document on stdout.  Exit status: 0 verified, 1 verification
failed, 2 invalid parameters.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click
import numpy as np

from .errors import BudgetExceeded, FFPermError, InvalidParameters, NotACompleteMapping, NotAPermutation
from .field import exhaustive_budget, make_field

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


def _indices(text: str | None) -> list[int]:
    if text is None or not text.strip():
        return []
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError as exc:
        raise InvalidParameters(f"expected comma-separated indices, got {text!r}") from exc


class Run:
    """Collects a report and exits with the matching status."""

    def __init__(self, command: str, params: dict, timing: bool = False, seed: int | None = None):
        self.report = {"command": command, "params": params, "verdict": "ok", "counters": {}}
        if seed is not None:
            self.report["seed"] = seed
        self.timing = timing
        self.start = time.perf_counter()

    def finish(self, ok: bool = True, **extra) -> None:
        self.report.update(extra)
        if not ok:
            self.report["verdict"] = "fail"
        self._emit(EXIT_OK if ok else EXIT_FAIL)

    def invalid(self, exc: Exception) -> None:
        self.report["verdict"] = "invalid-params"
        self.report["error"] = str(exc)
        self._emit(EXIT_INVALID)

    def _emit(self, code: int) -> None:
        if self.timing:
            self.report["elapsed"] = round(time.perf_counter() - self.start, 6)
        click.echo(json.dumps(self.report, sort_keys=True))
        sys.exit(code)


def _guard(run: Run, fn):
    """Run fn(); map parameter errors to exit 2 and failed checks to exit 1."""
    try:
        fn()
    except (InvalidParameters, BudgetExceeded, ZeroDivisionError, ValueError) as exc:
        run.invalid(exc)
    except (NotAPermutation, NotACompleteMapping, FFPermError) as exc:
        run.finish(False, error=str(exc))


timing_option = click.option("--timing", is_flag=True, help="Include elapsed seconds in the report.")


@click.group()
def main():
    """Permutation polynomials, complete mappings and their inverses over finite fields."""


@main.command("field-info")
@click.option("--p", "p", type=int, required=True)
@click.option("--deg", type=int, default=1, show_default=True)
@click.option("--subfield", type=int, default=None, help="List the elements of F_{p^s} by index.")
@timing_option
def field_info(p, deg, subfield, timing):
    """Modulus and size of F_{p^deg}."""
    run = Run("field-info", {"p": p, "deg": deg}, timing)

    def body():
        ctx = make_field(p, deg)
        out = ctx.to_json()
        out["element_count"] = ctx.order
        if subfield is not None:
            out["subfield"] = {"degree": subfield,
                               "elements": [int(i) for i in np.atleast_1d(ctx.to_index(ctx.subfield_elements(subfield)))]}
        run.report["counters"]["element_count"] = ctx.order
        run.finish(True, field=out)

    _guard(run, body)


def _field_params(f):
    for name in ("r", "n", "m", "p"):
        f = click.option(f"--{name}", name, type=int, required=True)(f)
    return f


@main.command("inv-binomial")
@_field_params
@click.option("--c", "c", type=int, required=True, help="Index of c.")
@click.option("--s", "s", type=int, default=1, show_default=True)
@timing_option
def inv_binomial(p, m, n, r, c, s, timing):
    """Classify x^{p^r} - c x on ker T_{q^n|q^s} and print its inverse."""
    from .binomial import BinomialSpec, Classification, kernel_inverse, verify_inverse

    run = Run("inv-binomial", {"p": p, "m": m, "n": n, "r": r, "c": c, "s": s}, timing)

    def body():
        spec = BinomialSpec.create(p, m, n, r, c, s)
        verdict, inv = kernel_inverse(spec)
        out = verdict.to_json()
        if inv is None:
            run.finish(False, **out, inverse=None, verified_points=0)
        kernel = spec.kernel()
        budget = exhaustive_budget()
        points = 0
        if kernel.size <= budget:
            points += verify_inverse(spec, inv, kernel.elements())
        if verdict.kind is Classification.FULL and spec.ctx.order <= budget:
            points += verify_inverse(spec, inv, spec.ctx.all_elements(budget))
        run.report["counters"]["verified_points"] = points
        run.finish(True, **out, inverse=inv.to_json(), verified_points=points)

    _guard(run, body)


# -- complete mappings ------------------------------------------------------------------


def _cpp_options(f):
    f = click.option("--G", "G", default="1", show_default=True, help="Coefficient indices of G, constant first.")(f)
    f = click.option("--a", "a", type=int, default=1, show_default=True)(f)
    f = click.option("--chain", default=None, help="Divisor chain 1,d_1,...,n for the multi-trace family.")(f)
    f = click.option("--a-list", "a_list", default=None, help="a_0,...,a_{L-1} for the multi-trace family.")(f)
    f = click.option("--f0", default=None, help="Coefficient indices of f_0 for the multi-trace family.")(f)
    f = click.option("--n", "n", type=int, default=None)(f)
    f = click.option("--r", "r", type=int, required=True)(f)
    f = click.option("--m", "m", type=int, required=True)(f)
    f = click.option("--p", "p", type=int, required=True)(f)
    return f


def _cpp_spec(p, m, n, r, G, a, chain, a_list, f0):
    from .complete import CMSpec, RecursiveCMSpec

    if chain is not None:
        return RecursiveCMSpec.create(p, m, r, _indices(chain), _indices(a_list), _indices(f0))
    if n is None:
        raise InvalidParameters("--n is required")
    spec = CMSpec.create(p, m, n, r, _indices(G), a)
    spec.require_valid()
    return spec


@main.group()
def cpp():
    """Complete mappings built from the trace map."""


@cpp.command("build")
@_cpp_options
@timing_option
def cpp_build(timing, **kw):
    """Construct the map (checking the base-field condition) and verify it when it fits the budget."""
    from .complete import RecursiveCMSpec, build_cpp, build_recursive_cpp, cpp_witness

    run = Run("cpp build", {k: v for k, v in kw.items() if v is not None}, timing)

    def body():
        spec = _cpp_spec(**kw)
        if isinstance(spec, RecursiveCMSpec):
            f = build_recursive_cpp(spec)
            meta = {"spec": spec.to_json()}
        else:
            f = build_cpp(spec)
            meta = {"spec": spec.to_json()}
        if spec.ctx.order <= exhaustive_budget():
            w = cpp_witness(f)
            run.report["counters"]["points_verified"] = spec.ctx.order
            run.finish(w is None, **meta, complete_mapping=w is None, witness=w)
        run.finish(True, **meta, complete_mapping=None, note="field exceeds exhaustive budget; not swept")

    _guard(run, body)


@cpp.command("verify")
@_cpp_options
@timing_option
def cpp_verify(timing, **kw):
    """Exhaustively test f and f + x for bijectivity, without the base-field precheck."""
    from .complete import RecursiveCMSpec, build_cpp, build_recursive_cpp, cpp_witness

    run = Run("cpp verify", {k: v for k, v in kw.items() if v is not None}, timing)

    def body():
        spec = _cpp_spec(**kw)
        if isinstance(spec, RecursiveCMSpec):
            f = build_recursive_cpp(spec, check=False)
        else:
            f = build_cpp(spec, check=False)
        w = cpp_witness(f)
        run.report["counters"]["points_verified"] = spec.ctx.order
        run.finish(w is None, spec=spec.to_json(), complete_mapping=w is None, witness=w)

    _guard(run, body)


@cpp.command("invert")
@_cpp_options
@timing_option
def cpp_invert(timing, **kw):
    """Build the inverse and check it against the forward map on the whole field."""
    from .complete import RecursiveCMSpec, build_cpp
    from .cpp_inverse import inverse_report, make_inverse_context

    run = Run("cpp invert", {k: v for k, v in kw.items() if v is not None}, timing)

    def body():
        spec = _cpp_spec(**kw)
        if isinstance(spec, RecursiveCMSpec):
            raise InvalidParameters("inversion is available only for the G-family")
        f = build_cpp(spec)
        ic = make_inverse_context(spec)
        rep = inverse_report(ic, f, spec.ctx.all_elements())
        run.report["counters"]["points_verified"] = spec.ctx.order
        run.report["counters"]["branch_counts"] = rep["branch_counts"]
        run.finish(rep["verified"], spec=spec.to_json(), **rep)

    _guard(run, body)


# -- Latin squares ------------------------------------------------------------------------


@main.command("mols")
@click.option("--spec", "spec_file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON file with p, m, n, r, G, b_list, a_list.")
@click.option("--p", "p", type=int, default=None)
@click.option("--m", "m", type=int, default=None)
@click.option("--n", "n", type=int, default=None)
@click.option("--r", "r", type=int, default=None)
@click.option("--G", "G", default="0", show_default=True)
@click.option("--b-list", "b_list", default="", help="Distinct b_i indices.")
@click.option("--a-list", "a_list", default=None, help="a_i indices (default all 1).")
@click.option("--out", "out", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--dir", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Directory for the emitted squares; omitted means no files.")
@timing_option
def mols(spec_file, p, m, n, r, G, b_list, a_list, out, out_dir, timing):
    """Emit the Cayley table plus one diagonal-method square per b_i and check orthogonality."""
    from .complete import SubfieldPolynomial
    from .latin import are_orthogonal, build_mols, is_latin

    params = {"p": p, "m": m, "n": n, "r": r, "G": G, "b_list": b_list, "a_list": a_list}
    run = Run("mols", {k: v for k, v in params.items() if v is not None}, timing)

    def body():
        nonlocal p, m, n, r, G, b_list, a_list
        if spec_file is not None:
            data = json.loads(Path(spec_file).read_text())
            p, m, n, r = (int(data[k]) for k in ("p", "m", "n", "r"))
            G = ",".join(str(i) for i in data.get("G", [0]))
            b_list = ",".join(str(i) for i in data.get("b_list", []))
            a_list = ",".join(str(i) for i in data["a_list"]) if "a_list" in data else None
            run.report["params"] = data
        if None in (p, m, n, r):
            raise InvalidParameters("p, m, n, r are required")
        ctx = make_field(p, m * n)
        bs = _indices(b_list)
        as_ = _indices(a_list) if a_list is not None else [1] * len(bs)
        squares = build_mols(ctx, m, n, r, SubfieldPolynomial(ctx, m, _indices(G)), bs, as_)
        latin = [is_latin(s) for s in squares]
        pairs = [[i, j, are_orthogonal(squares[i], squares[j])]
                 for i in range(len(squares)) for j in range(i + 1, len(squares))]
        files = []
        if out_dir is not None:
            d = Path(out_dir)
            d.mkdir(parents=True, exist_ok=True)
            for i, sq in enumerate(squares):
                path = d / f"square_{i}.{out}"
                path.write_text(sq.to_csv() if out == "csv" else json.dumps(sq.to_json()))
                files.append(str(path))
        ok = all(latin) and all(o for _, _, o in pairs)
        run.report["counters"].update({"squares": len(squares), "order": ctx.order,
                                       "pairs_checked": len(pairs)})
        run.finish(ok, latin=latin, orthogonal_pairs=pairs, files=files)

    _guard(run, body)


# -- bent functions -----------------------------------------------------------------------


@main.group()
def bent():
    """Maiorana-McFarland vectorial bent functions."""


@bent.command("verify")
@_field_params
@click.option("--G", "G", default="0", show_default=True)
@click.option("--k", "k", type=int, default=1, show_default=True)
@click.option("--alpha", type=int, default=1, show_default=True)
@click.option("--a-list", "a_list", default=None, help="a_i indices (default all 1).")
@click.option("--samples", type=int, default=None, help="Sampled Walsh mode with this many b-pairs.")
@click.option("--seed", type=int, default=0, show_default=True)
@timing_option
def bent_verify(p, m, n, r, G, k, alpha, a_list, samples, seed, timing):
    """Check the permutation certificate and bentness of every nonzero component combination."""
    from .bent import (VectorialBentSpec, build_mm_bent, combination_permutation_check,
                       combine_components, is_bent, nonzero_combinations)

    params = {"p": p, "m": m, "n": n, "r": r, "G": G, "k": k, "alpha": alpha, "a_list": a_list,
              "samples": samples}
    run = Run("bent verify", {kk: v for kk, v in params.items() if v is not None}, timing, seed)

    def body():
        as_ = _indices(a_list) if a_list is not None else [1] * k
        spec = VectorialBentSpec.create(p, m, n, r, _indices(G), k, alpha, as_)
        cert = combination_permutation_check(spec)
        comps = build_mm_bent(spec)
        results = []
        for c in nonzero_combinations(p, k):
            values = combine_components(comps, c).values()
            rep = is_bent(values, spec.ctx, samples=samples, seed=seed)
            results.append({"c": list(c), **rep})
        ok = cert["ok"] and all(r_["bent"] for r_ in results)
        run.report["counters"].update({"combinations": len(results),
                                       "walsh_values": sum(r_["checked_b"] for r_ in results)})
        mode = results[0]["mode"] if results else "exhaustive"
        run.finish(ok, bent=ok, mode=mode, certificate=cert, components=results)

    _guard(run, body)


# -- oracle cross-check -------------------------------------------------------------------


@main.group()
def oracle():
    """Cross-checks of closed forms against the linear-algebra solver."""


@oracle.command("compare")
@_field_params
@click.option("--c", "c", type=int, required=True)
@click.option("--s", "s", type=int, default=1, show_default=True)
@timing_option
def oracle_compare(p, m, n, r, c, s, timing):
    """Compare the closed-form binomial inverse with the solver output."""
    from .binomial import BinomialSpec, Classification, kernel_inverse, oracle_inverse

    run = Run("oracle compare", {"p": p, "m": m, "n": n, "r": r, "c": c, "s": s}, timing)

    def body():
        spec = BinomialSpec.create(p, m, n, r, c, s)
        verdict, closed = kernel_inverse(spec)
        if closed is None:
            run.finish(False, classification=verdict.kind.value, agree=False)
        budget = exhaustive_budget()
        agree, points = True, 0
        # the kernel is an invariant subspace only when c lies in F_{q^s}
        if spec.c.in_subfield(spec.sub_degree):
            kernel = spec.kernel()
            solver = oracle_inverse(spec)
            elems = kernel.elements() if kernel.size <= budget else kernel.sample(4096, np.random.default_rng(0))
            agree = bool(np.array_equal(closed(elems), solver(elems)))
            points = len(elems)
        if verdict.kind is Classification.FULL:
            full = oracle_inverse(spec, full_field=True)
            E = spec.ctx.all_elements(budget)
            agree = agree and bool(np.array_equal(closed(E), full(E)))
            points += len(E)
        run.report["counters"]["points_compared"] = points
        run.finish(agree, classification=verdict.kind.value, agree=agree)

    _guard(run, body)


if __name__ == "__main__":  # pragma: no cover
    main()
