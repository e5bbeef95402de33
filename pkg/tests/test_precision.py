from app.dynamics import check_commute, lubin_log, lubin_log_report
from app.padic import PadicScalar, RingConfig
from app.report import Status
from app.selftest import cmd_selftest
from app.series import TruncSeries


def _poly(cfg, values, cap):
    return TruncSeries.from_values(cfg, values, cap, True)


def test_log_at_higher_precision_refines_lower():
    low = RingConfig(3, rel_precision=24)
    high = low.with_precision(48)
    L_low = lubin_log(_poly(low, [0, 3, 0, 1], 9))
    L_high = lubin_log(_poly(high, [0, 3, 0, 1], 9))
    assert L_high.recast(low).agrees(L_low)


def test_log_certificate_grows_with_precision():
    reports = [lubin_log_report(_poly(RingConfig(5, rel_precision=r), [0, 5, 10, 10, 5, 1], 8))
               for r in (16, 32)]
    assert all(rep.agreement is not False for rep in reports)
    if all(rep.agreement for rep in reports):
        assert reports[0].precision <= reports[1].precision


def test_commute_certificate_grows_with_precision():
    results = []
    for r in (8, 24):
        cfg = RingConfig(3, rel_precision=r)
        results.append(check_commute(_poly(cfg, [0, 9, 6, 1], 10), _poly(cfg, [0, 4, 1], 10)))
    assert all(res.commute for res in results)
    assert results[0].precision <= results[1].precision


def test_cap_truncation_is_consistent():
    cfg = RingConfig(3, rel_precision=32)
    L12 = lubin_log(_poly(cfg, [0, 3, 0, 1], 12))
    L6 = lubin_log(_poly(cfg, [0, 3, 0, 1], 6))
    assert L12.truncate(6).agrees(L6)


def test_exact_scalars_survive_recast():
    low = RingConfig(7, rel_precision=4)
    s = _poly(low, [0, 7, 0, 1], 5).recast(low.with_precision(20))
    assert s.config.rel_precision == 20
    assert s[1] == PadicScalar.from_int(low.with_precision(20), 7)


def _precision_not_lower(low, high):
    if low is None or high is None:
        return True
    if low == "exact":
        return high == "exact"
    return high == "exact" or high >= low


def test_selftest_verdicts_are_stable_when_precision_grows():
    low = cmd_selftest(precision=32, cap=12)
    high = cmd_selftest(precision=48, cap=12)
    for a, b in zip(low.tasks, high.tasks):
        assert a.target == b.target
        assert a.status in (b.status, Status.indeterminate), a.target
        claims = b.data.get("claims", {})
        for name, claim in a.data.get("claims", {}).items():
            other = claims[name]
            if claim["holds"] is not None:
                assert other["holds"] == claim["holds"], (a.target, name)
            assert _precision_not_lower(claim["precision"], other["precision"]), (a.target, name)
