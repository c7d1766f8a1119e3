from consensus_obs.self_check import SelfCheckFailure, SelfCheckRunner, expect

import pytest


def test_self_check_passes(settings):
    lines = []
    assert SelfCheckRunner(settings, out=lines.append).run()
    assert lines[0] == "🚀 Starting Self-Check"
    assert sum("✅ PASS" in line for line in lines) == 8
    assert "Self-Check Completed Successfully" in lines[-1]


def test_failed_step_stops_the_run(settings, monkeypatch):
    lines = []
    runner = SelfCheckRunner(settings, out=lines.append)
    monkeypatch.setattr(runner, "_path_15", lambda: expect(False, "broken marking"))
    assert not runner.run()
    assert any("❌ FAIL: broken marking" in line for line in lines)
    assert not any("Cycle 15" in line for line in lines)


def test_expect():
    expect(True, "fine")
    with pytest.raises(SelfCheckFailure):
        expect(False, "nope")
