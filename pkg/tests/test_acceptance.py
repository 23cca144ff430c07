"""Acceptance criteria 1-9, one test each.

Every check is exact rational arithmetic, so the tolerance is pinned at zero.
Each test records a PASS/FAIL line (printed in the terminal summary) before
asserting, so a criterion that genuinely fails shows up as a red test with
its reason rather than being hidden.
"""

import json
import subprocess
import sys
import time

from qyangian.cli import main
from qyangian.currents import audit_theorem2, build_tower, serre_audit
from qyangian.hopfaudit import hopf_suite, load_presentation, presentation_json
from qyangian.rmatrixlab import CANONICAL, check_cobracket_laws, delta_claims, rmatrix_suite
from qyangian.suites import model_suite, pairing_suite, tensor_suite
from qyangian.supermodel import ModelConfig, audit_level0


def _fails(rep, prefix=""):
    return [f.id for f in rep if f.status == "fail" and f.id.startswith(prefix)]


def test_criterion_1_model_structure(record_criterion):
    wanted = ("sigma.involution", "dimension.g0", "dimension.g1", "closure", "jacobi")
    problems, slowest = [], 0.0
    for n in range(2, 6):
        start = time.perf_counter()
        rep = model_suite(n, triples=100)
        elapsed = time.perf_counter() - start
        slowest = max(slowest, elapsed)
        for ident in wanted:
            if not rep.by_id(ident).passed:
                problems.append(f"n={n}:{ident}")
        if elapsed >= 5:
            problems.append(f"n={n}:time {elapsed:.1f}s")
    ok = not problems
    record_criterion(1, "model structure n=2..5", ok, f"slowest {slowest:.2f}s; problems={problems}")
    assert ok, problems


def test_criterion_2_form_and_duality(record_criterion):
    wanted = ("isotropy.g0", "isotropy.g1", "gram.rank", "dual.identity", "residue.dual-currents")
    problems = []
    for n in range(2, 5):
        rep = pairing_suite(n, max_k=4)
        problems += [f"n={n}:{i}" for i in wanted if not rep.by_id(i).passed]
    ok = not problems
    record_criterion(2, "form and duality n=2..4", ok, f"problems={problems}")
    assert ok, problems


def test_criterion_3_rmatrix_identities(record_criterion):
    problems, times = [], {}
    for n in (2, 3):
        start = time.perf_counter()
        rep = rmatrix_suite(n)
        times[n] = round(time.perf_counter() - start, 2)
        for ident in ("unitarity.twisted", "cybe.twisted", "cybe.yang", "averaging.per-bracket",
                      "averaging.total", "averaging.identity-term"):
            if not rep.by_id(ident).passed:
                problems.append(f"n={n}:{ident}")
    if times[3] > 60:
        problems.append(f"n=3 took {times[3]}s")
    ok = not problems
    record_criterion(3, "unitarity, CYBE, averaging n=2,3", ok, f"seconds={times}; problems={problems}")
    assert ok, problems


def test_criterion_4_cocommutator(record_criterion):
    claim_fail, law_fail, detail = [], [], {}
    for n in (2, 3, 4):
        claims = delta_claims(n)
        claim_fail += [f"n={n}:{f.id}" for f in claims if f.status == "fail"]
        start = time.perf_counter()
        laws = check_cobracket_laws(n, 5, CANONICAL, pair_degree=5 if n <= 3 else 3)
        detail[n] = round(time.perf_counter() - start, 1)
        law_fail += [f"n={n}:{i}" for i in _fails(laws)]
    ok = not claim_fail and not law_fail
    record_criterion(4, "cocommutator values and laws n=2..4, degree 5", ok,
                     f"printed-value failures={len(claim_fail)} (e.g. {claim_fail[:3]}); law failures={law_fail}; "
                     f"seconds={detail}")
    assert not law_fail, law_fail
    assert not claim_fail, claim_fail


def test_criterion_5_tensor_brackets(record_criterion):
    problems = []
    for n in (2, 3):
        rep = tensor_suite(n)
        for ident in ("invariance", "prop.a.t0", "prop.a.t1", "prop.b.t0", "prop.b.t1"):
            if not rep.by_id(ident).passed:
                problems.append(f"n={n}:{ident}")
    ok = not problems
    record_criterion(5, "invariance identity and t0/t1 brackets n=2,3", ok, f"problems={problems}")
    assert ok, problems


def test_criterion_6_quantization(record_criterion):
    corr_fail, hom_fail, control_bad, signs = [], [], [], {}
    for n in (2, 3):
        rep = hopf_suite(n, controls=True)
        signs[n] = rep.by_id("correspondence.global-sign").witness["sign"]
        corr_fail += [f"n={n}:{i}" for i in _fails(rep, "correspondence.")]
        hom_fail += [f"n={n}:{i}" for i in _fails(rep, "delta-hom.")]
        control_bad += [f.id for f in rep if f.control and f.status != "info"]
    ok = not corr_fail and not hom_fail and not control_bad and all(signs.values())
    record_criterion(6, "correspondence and Δ-homomorphism n=2,3", ok,
                     f"global sign={signs}; correspondence failures={len(corr_fail)}; "
                     f"Δ-hom failures={len(hom_fail)}; controls behaving={not control_bad}")
    assert not control_bad, control_bad
    assert ok, (corr_fail[:5], hom_fail[:5])


def test_criterion_7_current_relations(record_criterion):
    fails, emitted, times = {}, {}, {}
    for n in range(2, 6):
        start = time.perf_counter()
        cfg = ModelConfig(n)
        tw = build_tower(cfg, 8)
        rep = audit_theorem2(cfg, 8, tw)
        rep.extend(serre_audit(cfg, tower=tw))
        times[n] = round(time.perf_counter() - start, 2)
        fails[n] = len(_fails(rep))
        emitted[n] = len(rep.select("scalar.even.lambda."))
        if n == 2:
            emitted["n2-zero"] = [f.status for f in rep.select("scalar.even.n2-zero.")]
    slow = {n: t for n, t in times.items() if t >= 30}
    ok = not any(fails.values()) and not slow and all(emitted[n] for n in range(2, 6))
    record_criterion(7, "current relations n=2..5, levels <= 8", ok,
                     f"failures per n={fails}; λ comparisons per n={emitted}; seconds={times}")
    assert not slow, slow
    assert ok, fails


def test_criterion_8_level0_audit(record_criterion):
    fails, erratum_ok = {}, True
    for n in range(2, 6):
        rep = audit_level0(ModelConfig(n))
        fails[n] = _fails(rep)
        for i in range(1, n):
            erratum_ok &= rep.by_id(f"h-formula.erratum.{i}").passed
            erratum_ok &= rep.by_id(f"h-formula.literal.{i}").status == "info"
    ok = erratum_ok and not any(fails.values())
    record_criterion(8, "level-0 relations n=2..5 with the h formula erratum", ok,
                     f"erratum finding emitted={erratum_ok}; failures per n="
                     f"{ {n: len(v) for n, v in fails.items()} } (e.g. {fails[3][:3]})")
    assert erratum_ok
    assert ok, fails


def test_criterion_9_determinism_and_tooling(record_criterion, tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"run{k}.json"
        proc = subprocess.run([sys.executable, "-m", "qyangian", "verify", "--suite", "all", "--n", "3",
                               "--out", str(path)], capture_output=True)
        outs.append((proc.returncode, path.read_bytes()))
    identical = outs[0][1] == outs[1][1]
    report = json.loads(outs[0][1])
    exit_ok = outs[0][0] == (1 if report["summary"]["fail"] else 0)
    pres = tmp_path / "pres.json"
    main(["dump", "presentation", "--n", "3", "--out", str(pres)])
    rt, dt = load_presentation(str(pres))
    round_trip = json.dumps({"relations": rt.to_json(), "coproduct": dt.to_json()}, sort_keys=True, indent=1,
                            ensure_ascii=False) + "\n" == presentation_json(3)
    config_exit = subprocess.run([sys.executable, "-m", "qyangian", "verify", "--n", "1"],
                                 capture_output=True).returncode
    clean_exit = main(["verify", "--suite", "rmatrix", "--n", "2", "--out", str(tmp_path / "r.json")])
    ok = identical and exit_ok and round_trip and config_exit == 2 and clean_exit == 0
    record_criterion(9, "determinism, dump round trip, exit codes", ok,
                     f"byte-identical={identical}; exit={outs[0][0]} with {report['summary']['fail']} fails; "
                     f"round-trip={round_trip}; config exit={config_exit}; clean exit={clean_exit}")
    assert ok
