from config.settings import Settings


def test_defaults():
    s = Settings(_env_file=None)
    assert s.frame_epsilon == 1e-10
    assert s.table_rel_tol == 5e-3
    assert s.table_abs_tol == 5e-4
    assert s.product_max_atoms == 4
    assert s.csv_digits == 17
    assert not s.oracle_inject_fault


def test_environment_override(monkeypatch):
    monkeypatch.setenv("ENTANGLE_FRAME_EPSILON", "1e-6")
    monkeypatch.setenv("entangle_sweep_jobs", "3")
    s = Settings(_env_file=None)
    assert s.frame_epsilon == 1e-6
    assert s.sweep_jobs == 3


def test_env_file(tmp_path):
    env = tmp_path / ".env"
    env.write_text("ENTANGLE_XI_STEP=0.05\nENTANGLE_LOG_LEVEL=DEBUG\n")
    s = Settings(_env_file=str(env))
    assert s.xi_step == 0.05
    assert s.log_level == "DEBUG"
