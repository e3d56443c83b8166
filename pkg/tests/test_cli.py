import json

from lfold.cli import main


def run(tmp_path, *args):
    base = [
        "--cache",
        str(tmp_path / "cache"),
        "--out",
        str(tmp_path / "out"),
    ]
    return main(base + list(args))


def read(tmp_path, name):
    return (tmp_path / "out" / name).read_bytes()


class TestCoeffs:
    def test_build_and_check(self, tmp_path):
        assert run(tmp_path, "--N", "1000", "--check", "coeffs") == 0
        cache = tmp_path / "cache" / "coeffs_w12_N1000.txt"
        assert cache.exists()
        assert cache.read_text().splitlines()[0] == "LFOLD-COEFFS v1 weight=12 N=1000"

    def test_cache_reused(self, tmp_path):
        run(tmp_path, "--N", "500", "coeffs")
        before = (tmp_path / "cache" / "coeffs_w12_N500.txt").read_bytes()
        assert run(tmp_path, "--N", "500", "coeffs") == 0
        assert (tmp_path / "cache" / "coeffs_w12_N500.txt").read_bytes() == before

    def test_larger_cache_covers_smaller_n(self, tmp_path):
        run(tmp_path, "--N", "600", "coeffs")
        assert run(tmp_path, "--N", "300", "--check", "coeffs") == 0
        # no new file for N=300; the N=600 cache was used
        assert not (tmp_path / "cache" / "coeffs_w12_N300.txt").exists()


class TestDecompose:
    def test_prints_coefficients(self, tmp_path, capsys):
        assert run(tmp_path, "--ell", "3", "decompose") == 0
        out = capsys.readouterr().out
        assert "ell=3: coefficients 1 2 identity=OK" in out


class TestExponents:
    def test_csv_rows(self, tmp_path):
        assert run(tmp_path, "--ell", "3..8", "exponents") == 0
        lines = read(tmp_path, "exponents.csv").decode().splitlines()
        assert lines[0] == "ell,kind,num,den,error_exponent,paper_quoted,match"
        assert lines[1] == "3,alpha,8,3,5/8,7/10,false"
        assert lines[5] == "7,alpha,164,3,161/164,161/164,true"
        assert len(lines) == 7

    def test_json_format(self, tmp_path):
        assert run(tmp_path, "--ell", "4", "--format", "json", "exponents") == 0
        doc = json.loads(read(tmp_path, "exponents.json"))
        assert doc["schema_version"] == 1
        row = doc["rows"][0]
        assert row["num"] == 299 and row["den"] == 42 and row["match"] is True


class TestReports:
    def test_sums_file(self, tmp_path):
        assert run(tmp_path, "--N", "2000", "--ell", "2,3", "--X", "100,1000", "sums") == 0
        lines = read(tmp_path, "sums.csv").decode().splitlines()
        assert lines[0] == "ell,X,S,T,A"
        assert len(lines) == 5

    def test_signs_file(self, tmp_path):
        assert run(tmp_path, "--N", "2000", "--ell", "3,5", "--X", "500,800", "signs") == 0
        lines = read(tmp_path, "signs.csv").decode().splitlines()
        assert lines[0] == "ell,X,delta,window_lo,window_hi,count,first_pair"
        assert len(lines) == 5
        # odd-power invariance: the ell=3 and ell=5 rows agree beyond the ell column
        assert lines[1].split(",")[1:] == lines[3].split(",")[1:]

    def test_lfun_stream(self, tmp_path):
        assert run(tmp_path, "--N", "2000", "--ell", "1", "--s", "2", "lfun") == 0
        lines = read(tmp_path, "lfun.jsonl").decode().splitlines()
        objs = [json.loads(line) for line in lines]
        assert {o["kind"] for o in objs} == {"S", "T"}
        for o in objs:
            assert o["schema_version"] == 1
            assert o["s"] == [2.0, 0.0]
            assert o["residual"] <= 1e-8
            assert o["N"] == 2000 and o["P"] == 2000

    def test_fit_file(self, tmp_path):
        assert run(tmp_path, "--N", "4000", "--ell", "2,4", "--X", "40..4000", "fit") == 0
        doc = json.loads(read(tmp_path, "fit.json"))
        assert doc["schema_version"] == 1
        by_ell = {f["ell"]: f for f in doc["fits"]}
        assert by_ell[2]["degree"] == 0
        assert by_ell[4]["degree"] == 1


class TestAudit:
    def test_green_verdict(self, tmp_path):
        assert run(tmp_path, "--N", "2000", "audit") == 0
        doc = json.loads(read(tmp_path, "audit.json"))
        assert doc["ok"] is True
        assert all(c["passed"] for c in doc["checks"])
        # the two documented exponent discrepancies arrive as warnings, not failures
        assert any("ell=3" in w for w in doc["warnings"])
        assert any("ell=5" in w for w in doc["warnings"])


class TestDeterminism:
    def test_rerun_byte_identical(self, tmp_path):
        args = ("--N", "2000", "--ell", "2,3", "--X", "100,1000", "sums")
        run(tmp_path, *args)
        first = read(tmp_path, "sums.csv")
        run(tmp_path, *args)
        assert read(tmp_path, "sums.csv") == first

    def test_thread_knob_does_not_change_bytes(self, tmp_path):
        run(tmp_path, "--N", "2000", "--ell", "1", "--s", "2.5", "--threads", "1", "lfun")
        first = read(tmp_path, "lfun.jsonl")
        run(tmp_path, "--N", "2000", "--ell", "1", "--s", "2.5", "--threads", "4", "lfun")
        assert read(tmp_path, "lfun.jsonl") == first


class TestErrors:
    def test_error_json_on_bad_delta(self, tmp_path, capsys):
        code = run(tmp_path, "--N", "500", "--delta", "1.5", "signs")
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "ValueError"
        assert "delta" in err["message"]

    def test_error_json_on_oversized_grid(self, tmp_path, capsys):
        code = run(tmp_path, "--N", "500", "--X", "100,600", "sums")
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "IndexError"


class TestOtherWeights:
    def test_weight_sixteen_prime_file_flow(self, tmp_path):
        # stage a prime-coefficient cache file, then drive it through coeffs
        from lfold import build_delta_qexpansion
        from lfold.sieves import primes_up_to

        n = 150
        delta = build_delta_qexpansion(n)

        def sigma3(k):
            return sum(d**3 for d in range(1, k + 1) if k % d == 0)

        e4 = [1] + [240 * sigma3(i) for i in range(1, n)]
        coeffs = [0] * (n + 1)
        for i in range(1, n + 1):
            coeffs[i] = sum(delta.coefficients[j] * e4[i - j] for j in range(1, i + 1))
        cache = tmp_path / "cache"
        cache.mkdir()
        with open(cache / f"coeffs_w16_N{n}.txt", "w") as fh:
            fh.write(f"LFOLD-COEFFS v1 weight=16 N={n}\n")
            for p in primes_up_to(n):
                fh.write(f"{p} {coeffs[p]}\n")
        assert run(tmp_path, "--weight", "16", "--N", str(n), "--check", "coeffs") == 0

    def test_missing_weight_cache_errors(self, tmp_path, capsys):
        code = run(tmp_path, "--weight", "18", "--N", "100", "coeffs")
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert "prime-coefficient" in err["message"]


class TestEnvironment:
    def test_cache_env_var_default(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LFOLD_CACHE", str(tmp_path / "envcache"))
        code = main(["--N", "300", "--out", str(tmp_path / "out"), "coeffs"])
        assert code == 0
        assert (tmp_path / "envcache" / "coeffs_w12_N300.txt").exists()


class TestConfigFile:
    def test_file_values_and_flag_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("N=500\nell=3\n# comment\ndelta=0.25\n")
        code = main(
            [
                "--config",
                str(cfg),
                "--cache",
                str(tmp_path / "cache"),
                "--out",
                str(tmp_path / "out"),
                "--ell",
                "4",  # flag wins over the file
                "decompose",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "ell=4:" in out and "ell=3:" not in out

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bogus=1\n")
        code = main(["--config", str(cfg), "--out", str(tmp_path / "out"), "decompose"])
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "ValueError"
