import json
from unittest.mock import patch

from admsynth.schemas.oracle import GameCheck


def test_oracle_single_game(cli, data_dir):
    """Test the cross-check of one game at a fixed budget."""
    code, out, _ = cli("oracle-check", "--game", data_dir / "detour_game.json", "--budget", 12)
    assert code == 0
    report = json.loads(out)
    assert report["games"] == 1
    assert report["disagreements"] == 0
    check = report["checks"][0]
    assert check["sys_strategies"] == 4
    assert check["wcoop_member"] is True


def test_oracle_corpus(cli):
    """Test a small seeded corpus."""
    code, out, _ = cli("oracle-check", "--seed", 9, "--games", 5, "--max-states", 6)
    assert code == 0
    report = json.loads(out)
    assert report["games"] == 5
    assert report["meta"]["seed"] == 9
    assert report["disagreements"] == 0


def test_oracle_enumeration_cap(cli, data_dir, error_response):
    """Test that an oversized enumeration exits with 3."""
    code, _, err = cli(
        "oracle-check",
        "--game",
        data_dir / "detour_game.json",
        "--budget",
        12,
        "--enumeration-cap",
        100,
    )
    assert code == 3
    assert error_response(err).kind == "EnumerationTooLarge"


def test_oracle_mismatch_exit_code(cli, data_dir):
    """Test that a disagreement exits with 2 after writing the report."""
    bad = GameCheck(
        index=0,
        states=11,
        budget=12,
        nodes=1,
        sys_strategies=1,
        env_strategies=1,
        admissible=1,
        admissible_winning=1,
        admissible_mismatches=1,
    )
    with patch(
        "admsynth.commands.oracle_commands.verify_corpus", return_value=[bad]
    ):
        code, out, _ = cli(
            "oracle-check", "--game", data_dir / "detour_game.json", "--budget", 12
        )
    assert code == 2
    assert json.loads(out)["disagreements"] == 1


def test_oracle_game_needs_budget(cli, data_dir):
    """Test that a single game needs a budget."""
    code, _, _ = cli("oracle-check", "--game", data_dir / "detour_game.json")
    assert code == 1
