"""Identity suites: seeded verification of every operator law.

Each suite draws seeded random fields, runs one family of identities in
exact rational arithmetic (pass means residual exactly zero) or through
the Monte-Carlo oracle, and emits one record per case.  Cap overflows are
recorded as skipped; any other failure marks the case failed rather than
aborting the run.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dfield, replace
from fractions import Fraction

from . import kernels as kn
from .chaos import (
    HTensorField,
    add as fadd,
    brownian,
    conditional_expectation,
    constant,
    expectation,
    expectation_field,
    field,
    is_adapted,
    ito_product,
    l2_inner,
    l2_norm_sq,
    scale as fscale,
    sub as fsub,
)
from .clark_ocone import (
    closedness_witness,
    reconstruct_closed,
    reconstruct_coclosed,
    represent_co1,
    represent_co2,
    s_map,
    t_map,
)
from .errors import CapExceededError, ConfigError
from .forms import (
    codifferential,
    commutation_check_codifferential,
    commutation_check_derivative,
    exterior_derivative,
    laplacian,
)
from .grid import TimeGrid
from .malliavin import (
    condition_on_axis,
    gradient,
    ito_integral,
    project_adapted,
    project_adapted_j,
    skorohod,
)
from .montecarlo import mc_check, pathwise_square, sample_paths, evaluate
from .randomfields import generate_field
from .report import FAIL, PASS, SKIP_CAP, CaseRecord, VerificationReport


@dataclass(frozen=True)
class SuiteConfig:
    """Sweep parameters for a verification run."""

    n_cells: int = 2
    breakpoints: tuple | None = None
    horizon: int | str = 1
    m: int = 1
    q_values: tuple[int, ...] = (1, 2)
    p_max: int = 3
    atom_cap: int = 500_000
    axis_cap: int = 12
    seeds: tuple[int, ...] = tuple(range(10))
    mode: str = "exact"  # exact | mc | both
    mc_paths: int = 10_000
    mc_refinement: int = 1
    atoms_per_level: int = 2

    def __post_init__(self):
        if self.mode not in ("exact", "mc", "both"):
            raise ConfigError(f"invalid mode {self.mode!r}")
        if self.p_max < 0 or self.atom_cap < 1 or self.axis_cap < 1:
            raise ConfigError("caps must be positive")
        if not self.seeds:
            raise ConfigError("need at least one seed")

    def grid(self) -> TimeGrid:
        if self.breakpoints is not None:
            return TimeGrid.from_breakpoints([Fraction(b) for b in self.breakpoints])
        return TimeGrid.uniform(self.n_cells, Fraction(self.horizon))

    def describe(self, **extra) -> dict:
        d = {"n": self.grid().n_cells, "m": self.m, "pmax": self.p_max}
        d.update(extra)
        return d


def _case(suite: str, identity: str, config: dict, seed, fn) -> CaseRecord:
    t0 = time.perf_counter()
    try:
        result = fn()
    except CapExceededError as exc:
        return CaseRecord(suite, identity, config, seed, SKIP_CAP, residual=str(exc))
    except Exception as exc:  # a broken operator must fail the case, not the run
        return CaseRecord(
            suite,
            identity,
            config,
            seed,
            FAIL,
            residual=f"{type(exc).__name__}: {exc}",
            wall_ms=(time.perf_counter() - t0) * 1e3,
        )
    wall = (time.perf_counter() - t0) * 1e3
    if isinstance(result, HTensorField):
        ok = result.is_zero()
        residual = "0" if ok else str(l2_norm_sq(result))
    elif isinstance(result, tuple):
        ok, residual = result
    else:
        ok, residual = bool(result), ""
    return CaseRecord(suite, identity, config, seed, PASS if ok else FAIL, residual, wall_ms=wall)


def _gen(cfg: SuiteConfig, q: int, seed: int, skew: bool = True, salt: int = 0) -> HTensorField:
    return generate_field(
        cfg.grid(),
        cfg.m,
        q,
        cfg.p_max,
        seed * 1000003 + salt if salt else seed,
        skew=skew,
        atoms_per_level=cfg.atoms_per_level,
    )


def _gen_cases(records, suite, identity, desc, cfg, q, seed, skew=True, salt=0):
    """Generate a field, or record a skip when a cap is exceeded."""
    try:
        return _gen(cfg, q, seed, skew=skew, salt=salt)
    except CapExceededError as exc:
        records.append(CaseRecord(suite, identity, desc, seed, SKIP_CAP, residual=str(exc)))
        return None


def _mc_record(suite, identity, cfg: SuiteConfig, seed, lhs, rhs, desc) -> CaseRecord:
    t0 = time.perf_counter()
    try:
        res = mc_check(
            lhs,
            rhs,
            grid=cfg.grid(),
            m=cfg.m,
            n_paths=cfg.mc_paths,
            refinement=cfg.mc_refinement,
            seed=seed if seed is not None else 0,
            identity=identity,
        )
    except CapExceededError as exc:
        return CaseRecord(suite, identity, desc, seed, SKIP_CAP, residual=str(exc))
    ok = res.passed
    if cfg.m == 1 and cfg.mc_refinement == 1:
        ok = ok and res.rel_max <= 1e-10  # exact-evaluation mode: pathwise match
    return CaseRecord(
        suite,
        identity,
        desc,
        seed,
        PASS if ok else FAIL,
        residual=f"{res.max_abs:.3e}",
        stats=res.stats(),
        wall_ms=(time.perf_counter() - t0) * 1e3,
    )


# --- individual suites ----------------------------------------------------


def suite_co1(cfg: SuiteConfig) -> list[CaseRecord]:
    records = []
    for q in cfg.q_values:
        desc = cfg.describe(q=q)
        for seed in cfg.seeds:
            u = _gen_cases(records, "co1", "CO-I", desc, cfg, q, seed)
            if u is None:
                continue
            if cfg.mode in ("exact", "both"):
                try:
                    dec = represent_co1(u)
                except CapExceededError as exc:
                    records.append(
                        CaseRecord("co1", "CO-I", desc, seed, SKIP_CAP, residual=str(exc))
                    )
                    continue
                except Exception as exc:
                    records.append(
                        CaseRecord(
                            "co1", "CO-I", desc, seed, FAIL, residual=f"{type(exc).__name__}: {exc}"
                        )
                    )
                    continue
                records.append(_case("co1", "CO-I", desc, seed, lambda: dec.residual))
                records.append(_case("co1", "CO-I-compact", desc, seed, lambda: dec.compact_ok))
                if q >= 1:
                    records.append(
                        _case(
                            "co1",
                            "unique-KerPV",
                            desc,
                            seed,
                            lambda: project_adapted(dec.remainder),
                        )
                    )
                else:
                    records.append(
                        _case(
                            "co1",
                            "unique-KerPV",
                            desc,
                            seed,
                            lambda: (expectation(dec.remainder) == 0, ""),
                        )
                    )
            if cfg.mode in ("mc", "both"):
                try:
                    dec = represent_co1(u)
                except CapExceededError as exc:
                    records.append(CaseRecord("co1", "CO-I-mc", desc, seed, SKIP_CAP, residual=str(exc)))
                    continue
                rhs = fadd(dec.exact_part, dec.remainder)
                records.append(_mc_record("co1", "CO-I-mc", cfg, seed, u, rhs, desc))
    return records


def suite_co2(cfg: SuiteConfig) -> list[CaseRecord]:
    records = []
    for q in cfg.q_values:
        if q < 1:
            continue
        desc = cfg.describe(q=q)
        for seed in cfg.seeds:
            u = _gen_cases(records, "co2", "CO-II", desc, cfg, q, seed)
            if u is None:
                continue
            if cfg.mode in ("exact", "both"):
                try:
                    dec = represent_co2(u)
                except CapExceededError as exc:
                    records.append(
                        CaseRecord("co2", "CO-II", desc, seed, SKIP_CAP, residual=str(exc))
                    )
                    continue
                except Exception as exc:
                    records.append(
                        CaseRecord(
                            "co2", "CO-II", desc, seed, FAIL, residual=f"{type(exc).__name__}: {exc}"
                        )
                    )
                    continue
                records.append(_case("co2", "CO-II", desc, seed, lambda: dec.residual))
                records.append(_case("co2", "CO-II-compact", desc, seed, lambda: dec.compact_ok))
                records.append(
                    _case("co2", "unique-V", desc, seed, lambda: is_adapted(dec.remainder))
                )
            if cfg.mode in ("mc", "both"):
                try:
                    dec = represent_co2(u)
                except CapExceededError as exc:
                    records.append(CaseRecord("co2", "CO-II-mc", desc, seed, SKIP_CAP, residual=str(exc)))
                    continue
                rhs = fadd(dec.exact_part, dec.remainder)
                records.append(_mc_record("co2", "CO-II-mc", cfg, seed, u, rhs, desc))
    return records


def suite_structural(cfg: SuiteConfig) -> list[CaseRecord]:
    records = []
    for q in cfg.q_values:
        if q < 1:
            continue
        desc = cfg.describe(q=q)
        for seed in cfg.seeds:
            u = _gen_cases(records, "structural", "structural", desc, cfg, q, seed)
            v_hi = _gen_cases(records, "structural", "structural", desc, cfg, q + 1, seed, salt=1)
            if u is None or v_hi is None:
                continue
            records.append(
                _case("structural", "dd=0", desc, seed,
                      lambda: exterior_derivative(exterior_derivative(u)))
            )
            records.append(
                _case("structural", "d*d*=0", desc, seed,
                      lambda: codifferential(codifferential(v_hi)))
            )
            records.append(
                _case(
                    "structural",
                    "adjoint",
                    desc,
                    seed,
                    lambda: (
                        l2_inner(exterior_derivative(u), v_hi)
                        == l2_inner(u, codifferential(v_hi)),
                        "",
                    ),
                )
            )
            records.append(
                _case("structural", "Lemma-dq*", desc, seed,
                      lambda: commutation_check_codifferential(u).residual)
            )
            records.append(
                _case("structural", "Lemma-dq", desc, seed,
                      lambda: commutation_check_derivative(u).residual)
            )
            u0 = _gen_cases(records, "structural", "P_V-algebra", desc, cfg, q, seed, skew=False, salt=2)
            v0 = _gen_cases(records, "structural", "P_V-algebra", desc, cfg, q, seed, skew=False, salt=3)
            if u0 is None or v0 is None:
                continue
            records.append(
                _case("structural", "P_V-algebra", desc, seed, lambda: _pv_algebra(u0, v0))
            )
            records.append(
                _case("structural", "cond-CO", desc, seed, lambda: _conditioned_identity(u0))
            )
        # order-independent laws, once per seed at the first q
        if q == min(cfg.q_values):
            for seed in cfg.seeds:
                w1 = _gen_cases(records, "structural", "duality-grad", desc, cfg, 1, seed, salt=4)
                f0 = _gen_cases(records, "structural", "duality-grad", desc, cfg, 0, seed, salt=5)
                if w1 is None or f0 is None:
                    continue
                records.append(
                    _case(
                        "structural",
                        "duality-grad",
                        desc,
                        seed,
                        lambda: (
                            l2_inner(skorohod(w1), f0) == l2_inner(w1, gradient(f0)),
                            "",
                        ),
                    )
                )
                a1 = _gen_cases(records, "structural", "ito-isometry", desc, cfg, 1, seed, salt=6)
                if a1 is None:
                    continue
                a = project_adapted(a1)
                records.append(
                    _case(
                        "structural",
                        "ito-isometry",
                        desc,
                        seed,
                        lambda: (
                            l2_norm_sq(ito_integral(a)) == l2_norm_sq(a),
                            "",
                        ),
                    )
                )
                records.append(
                    _case("structural", "grading", desc, seed, lambda: _grading(w1, f0))
                )
    return records


def _pv_algebra(u0: HTensorField, v0: HTensorField) -> tuple[bool, str]:
    q = u0.q
    parts = [project_adapted_j(u0, j) for j in range(q)]
    total = parts[0]
    for p in parts[1:]:
        total = fadd(total, p)
    pv = project_adapted(u0)
    checks = [total == pv]
    for j, pj in enumerate(parts):
        checks.append(project_adapted_j(pj, j) == pj)
        for i in range(q):
            if i != j:
                checks.append(project_adapted_j(pj, i).is_zero())
    checks.append(project_adapted(pv) == pv)
    checks.append(l2_inner(pv, v0) == l2_inner(u0, project_adapted(v0)))
    ok = all(checks)
    return ok, "" if ok else "projection law violated"


def _conditioned_identity(u0: HTensorField) -> HTensorField:
    """Conditioning a field at its own top param time equals its mean plus
    the running Ito integral of the conditioned gradient stopped there."""
    g = gradient(u0)
    full = ito_integral(condition_on_axis(g, 0))
    from .clark_ocone import _tail_ito_first_axis

    tail = _tail_ito_first_axis(g)
    rhs = fadd(expectation_field(u0), fsub(full, tail))
    return fsub(project_adapted(u0), rhs)


def _grading(w1: HTensorField, f0: HTensorField) -> tuple[bool, str]:
    g = gradient(f0)
    ok = all(p + 1 in f0.degrees() for p in g.degrees()) and all(
        p - 1 in {d for d in g.degrees()} or p == 0 for p in f0.degrees()
    )
    s = skorohod(w1)
    ok = ok and all(p - 1 in w1.degrees() for p in s.degrees())
    return ok, "" if ok else "chaos grading violated"


def suite_numberop(cfg: SuiteConfig) -> list[CaseRecord]:
    records = []
    for q in cfg.q_values:
        if q < 1:
            continue
        desc = cfg.describe(q=q)
        for seed in cfg.seeds:
            u = _gen_cases(records, "numberop", "NumberOp", desc, cfg, q, seed)
            if u is None:
                continue

            def _number_op(u=u, q=q):
                lap = laplacian(u)
                expect = {p: kn.scale(k, p + q) for p, k in u.levels}
                want = field(u.grid, u.m, q, expect, symmetrize_chaos=False)
                return fsub(lap, want)

            records.append(_case("numberop", "NumberOp", desc, seed, _number_op))
            records.append(_case("numberop", "harmonic", desc, seed, lambda: _harmonic(u)))
    return records


def _harmonic(u: HTensorField) -> tuple[bool, str]:
    """No nonzero generated field is both closed and co-closed, and for a
    closed field the squared norm equals the pairing of its potential with
    its codifferential (hence vanishes when both are zero)."""
    du = exterior_derivative(u)
    dstar = codifferential(u)
    if du.is_zero() and dstar.is_zero():
        if not u.is_zero():
            return False, "nonzero harmonic field"
        return True, ""
    if du.is_zero():
        lhs = l2_norm_sq(u)
        rhs = l2_inner(t_map(u), dstar)
        if lhs != rhs:
            return False, f"{lhs} != {rhs}"
    zero = fscale(u, 0)
    if l2_norm_sq(zero) != 0:
        return False, "zero field has nonzero norm"
    return True, ""


def suite_iff(cfg: SuiteConfig) -> list[CaseRecord]:
    records = []
    for q in cfg.q_values:
        if q < 1:
            continue
        desc = cfg.describe(q=q)
        for seed in cfg.seeds:
            u = _gen_cases(records, "iff", "iff", desc, cfg, q, seed)
            if u is None:
                continue

            def _iff(u=u):
                w = closedness_witness(u)
                ok = w.agrees
                return ok, "" if ok else "witness/exterior-derivative verdicts disagree"

            t0 = time.perf_counter()
            try:
                w = closedness_witness(u)
                rec = CaseRecord(
                    "iff",
                    "iff",
                    desc,
                    seed,
                    PASS if w.agrees else FAIL,
                    residual="" if w.agrees else "verdicts disagree",
                    stats={"closed": w.closed},
                    wall_ms=(time.perf_counter() - t0) * 1e3,
                )
            except CapExceededError as exc:
                rec = CaseRecord("iff", "iff", desc, seed, SKIP_CAP, residual=str(exc))
            records.append(rec)
            records.append(_case("iff", "KerPV-image", desc, seed, lambda: _kerpv_image(u)))
    return records


def _kerpv_image(v: HTensorField) -> tuple[bool, str]:
    """On the image of the exterior derivative, the adapted projection and
    its first summand vanish only on the zero field."""
    w = exterior_derivative(v)
    flags = (project_adapted_j(w, 0).is_zero(), project_adapted(w).is_zero(), w.is_zero())
    ok = flags[0] == flags[1] == flags[2]
    return ok, "" if ok else f"disagreeing verdicts {flags}"


def suite_recon(cfg: SuiteConfig) -> list[CaseRecord]:
    records = []
    for q in cfg.q_values:
        if q < 1:
            continue
        desc = cfg.describe(q=q)
        for seed in cfg.seeds:
            v = _gen_cases(records, "recon", "recon-closed", desc, cfg, q, seed, salt=7)
            w = _gen_cases(records, "recon", "recon-coclosed", desc, cfg, q + 1, seed, salt=8)
            if v is None or w is None:
                continue

            def _closed(v=v):
                u = exterior_derivative(v)
                if u.is_zero():
                    return True, ""
                return (reconstruct_closed(u) == u, "")

            def _coclosed(w=w):
                u = codifferential(w)
                if u.is_zero():
                    return True, ""
                return (reconstruct_coclosed(u) == u, "")

            def _duality(v=v, w=w):
                u2 = codifferential(w)  # co-closed by construction
                if u2.is_zero():
                    return True, ""
                lhs = l2_inner(u2, v)
                rhs = l2_inner(s_map(u2), exterior_derivative(v))
                return (lhs == rhs, "" if lhs == rhs else f"{lhs} != {rhs}")

            records.append(_case("recon", "recon-closed", desc, seed, _closed))
            records.append(_case("recon", "recon-coclosed", desc, seed, _coclosed))
            records.append(_case("recon", "duality", desc, seed, _duality))
    return records


def suite_hand(cfg: SuiteConfig) -> list[CaseRecord]:
    """The fixed worked examples (independent of the sweep parameters)."""
    records = []
    g1 = TimeGrid.uniform(1)
    desc = {"grid": "unit", "m": 1}

    def _example_a():
        u = field(g1, 1, 1, {1: kn.kernel(g1, 1, 2, [((0, 0), 1, {0: (1, 0)})])})
        half_i2 = field(g1, 1, 0, {2: kn.kernel(g1, 1, 2, [((0, 0), Fraction(1, 2))])})
        dec = represent_co1(u)
        exact = field(g1, 1, 1, {1: kn.kernel(g1, 1, 2, [((0, 0), 1)])})
        rem = field(g1, 1, 1, {1: kn.kernel(g1, 1, 2, [((0, 0), -1, {0: (0, 1)})])})
        ok = (
            t_map(u) == half_i2
            and dec.ok
            and dec.exact_part == exact
            and dec.remainder == rem
        )
        return ok, "" if ok else "hand example (a) mismatch"

    def _example_b():
        u = field(g1, 1, 1, {1: kn.kernel(g1, 1, 2, [((0, 0), 1)])})
        s2 = s_map(u)
        want_s2 = field(
            g1, 1, 2,
            {0: kn.kernel(g1, 1, 2, [((0, 0), 1, {0: (1, 0)}), ((0, 0), -1, {0: (0, 1)})])},
        )
        dec = represent_co2(u)
        want_exact = field(
            g1, 1, 1,
            {1: kn.kernel(g1, 1, 2, [((0, 0), 1), ((0, 0), -2, {0: (1, 0)})])},
        )
        want_rem = field(g1, 1, 1, {1: kn.kernel(g1, 1, 2, [((0, 0), 2, {0: (1, 0)})])})
        ok = (
            s2 == want_s2
            and dec.ok
            and dec.exact_part == want_exact
            and dec.remainder == want_rem
            and reconstruct_closed(u) == u
        )
        return ok, "" if ok else "hand example (b) mismatch"

    def _example_c():
        g2 = TimeGrid.from_breakpoints([0, Fraction(1, 2), 1])
        wk = kn.kernel(g2, 1, 2, [((0, 1), 1), ((1, 0), -1)])
        w = field(g2, 1, 2, {0: wk}, skew=True)
        want_t1 = field(g2, 1, 1, {1: kn.kernel(g2, 1, 2, [((0, 1), -1)])})
        ok = t_map(w) == want_t1 and reconstruct_closed(w) == w
        return ok, "" if ok else "hand example (c) mismatch"

    def _example_q0():
        b = brownian(g1)
        f = ito_product(b, b)
        dec = represent_co1(f)
        i2 = field(g1, 1, 0, {2: kn.kernel(g1, 1, 2, [((0, 0), 1)])})
        ok = dec.ok and dec.exact_part == constant(g1, 1, 1) and dec.remainder == i2
        return ok, "" if ok else "scalar representation mismatch"

    def _nonorth():
        u = field(g1, 1, 1, {1: kn.kernel(g1, 1, 2, [((0, 0), 1, {0: (1, 0)})])})
        dec = represent_co1(u)
        inner = l2_inner(dec.exact_part, dec.remainder)
        return inner != 0, "" if inner != 0 else "terms unexpectedly orthogonal"

    records.append(_case("hand", "hand-a", desc, None, _example_a))
    records.append(_case("hand", "hand-b", desc, None, _example_b))
    records.append(_case("hand", "hand-c", desc, None, _example_c))
    records.append(_case("hand", "hand-q0", desc, None, _example_q0))
    records.append(_case("hand", "nonorth", desc, None, _nonorth))
    return records


def suite_mc(cfg: SuiteConfig) -> list[CaseRecord]:
    records = []
    g = cfg.grid()
    desc = cfg.describe(N=cfg.mc_paths, R=cfg.mc_refinement)

    def _sampler_mean():
        batch = sample_paths(g, cfg.m, cfg.mc_refinement, cfg.mc_paths, cfg.seeds[0])
        b = evaluate(brownian(g, cfg.m), batch)
        t = float(g.horizon)
        bound = 4.0 * (t / cfg.mc_paths) ** 0.5
        return abs(float(b.mean())) <= bound, f"{float(b.mean()):.4e}"

    def _sampler_var():
        batch = sample_paths(g, cfg.m, cfg.mc_refinement, cfg.mc_paths, cfg.seeds[0])
        b = evaluate(brownian(g, cfg.m), batch)
        t = float(g.horizon)
        bound = 4.0 * t * (2.0 / cfg.mc_paths) ** 0.5
        return abs(float(b.var()) - t) <= bound, f"{float(b.var()):.4e}"

    records.append(_case("mc", "mc-sampler-mean", desc, cfg.seeds[0], _sampler_mean))
    records.append(_case("mc", "mc-sampler-var", desc, cfg.seeds[0], _sampler_var))

    for q in cfg.q_values:
        for seed in cfg.seeds[: min(len(cfg.seeds), 3)]:
            u = _gen_cases(records, "mc", "CO-I-mc", cfg.describe(q=q), cfg, q, seed)
            if u is None:
                continue
            try:
                dec = represent_co1(u)
            except CapExceededError as exc:
                records.append(CaseRecord("mc", "CO-I-mc", cfg.describe(q=q), seed, SKIP_CAP, residual=str(exc)))
                continue
            rhs = fadd(dec.exact_part, dec.remainder)
            records.append(
                _mc_record("mc", "CO-I-mc", cfg, seed, u, rhs, cfg.describe(q=q))
            )
            if q >= 1:
                try:
                    dec2 = represent_co2(u)
                except CapExceededError as exc:
                    records.append(CaseRecord("mc", "CO-II-mc", cfg.describe(q=q), seed, SKIP_CAP, residual=str(exc)))
                    continue
                rhs2 = fadd(dec2.exact_part, dec2.remainder)
                records.append(
                    _mc_record("mc", "CO-II-mc", cfg, seed, u, rhs2, cfg.describe(q=q))
                )

    def _negative():
        b = brownian(g, cfg.m)
        res = mc_check(
            b,
            fadd(b, constant(g, cfg.m, 1)),
            grid=g,
            m=cfg.m,
            n_paths=min(cfg.mc_paths, 2000),
            refinement=cfg.mc_refinement,
            seed=cfg.seeds[0],
            bias_coeff=0.0,
            identity="mc-negative",
        )
        return (not res.passed), "corrupted comparison must fail"

    records.append(_case("mc", "mc-negative", desc, cfg.seeds[0], _negative))

    if cfg.m >= 2:

        def _bias_monotone():
            fk = kn.kernel(g, cfg.m, 2, [(((0, 0)), {(0, 1): Fraction(1)}, {0: (0, 1)})])
            f = field(g, cfg.m, 0, {2: fk})
            exact = float(l2_norm_sq(f))
            biases = []
            for r in (1, 2, 4, 8):
                res = mc_check(
                    exact,
                    pathwise_square(f),
                    grid=g,
                    m=cfg.m,
                    n_paths=max(cfg.mc_paths, 50_000),
                    refinement=r,
                    seed=cfg.seeds[0],
                    identity="mc-bias",
                )
                biases.append(abs(res.mean))
            ok = all(b1 > b2 for b1, b2 in zip(biases, biases[1:]))
            return ok, ",".join(f"{b:.4f}" for b in biases)

        records.append(_case("mc", "mc-bias", desc, cfg.seeds[0], _bias_monotone))
    return records


SUITES = {
    "co1": suite_co1,
    "co2": suite_co2,
    "structural": suite_structural,
    "numberop": suite_numberop,
    "iff": suite_iff,
    "recon": suite_recon,
    "hand": suite_hand,
    "mc": suite_mc,
}

EXACT_SUITES = ("co1", "co2", "structural", "numberop", "iff", "recon", "hand")


def run_suite(cfg: SuiteConfig, suites: tuple[str, ...] | str = "all") -> VerificationReport:
    if isinstance(suites, str):
        suites = tuple(SUITES) if suites == "all" else (suites,)
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suite(s) {unknown}; known: {sorted(SUITES)}")
    previous = kn.get_caps()
    kn.set_caps(max_atoms=cfg.atom_cap, max_axes=cfg.axis_cap)
    report = VerificationReport()
    try:
        for name in suites:
            if name == "mc" and cfg.mode == "exact":
                continue
            if name != "mc" and cfg.mode == "mc":
                if name not in ("co1", "co2"):
                    continue
            report.extend(SUITES[name](cfg))
    finally:
        kn.set_caps(max_atoms=previous.max_atoms, max_axes=previous.max_axes)
    return report
