import json


def test_unroll_stats(cli, data_dir):
    """Test the arena summary of the trap game."""
    code, out, _ = cli("unroll", "--game", data_dir / "trap_game.json", "--budget", 1)
    assert code == 0
    report = json.loads(out)
    assert report["stats"]["nodes"] == 10
    assert report["stats"]["root_region"] == "pending"
    assert report["nodes"] is None
    assert report["meta"]["budget"] == 1


def test_unroll_dump_nodes(cli, data_dir):
    """Test the full node dump."""
    code, out, _ = cli(
        "unroll", "--game", data_dir / "trap_game.json", "--budget", 1, "--dump-nodes"
    )
    assert code == 0
    nodes = json.loads(out)["nodes"]
    assert len(nodes) == 10
    assert nodes[3]["kind"] == "dead" and nodes[3]["aval"] == "inf"


def test_unroll_needs_budget(cli, data_dir, error_response):
    """Test that unrolling a game without a budget fails cleanly."""
    code, _, err = cli("unroll", "--game", data_dir / "detour_game.json")
    assert code == 1
    assert "--budget" in error_response(err).detail


def test_unroll_node_cap(cli, data_dir, error_response):
    """Test that an oversized arena exits with 3."""
    code, _, err = cli(
        "unroll", "--game", data_dir / "detour_game.json", "--budget", 12, "--node-cap", 10
    )
    assert code == 3
    response = error_response(err)
    assert response.kind == "BudgetOverflowGuard"
    assert response.exit_code == 3


def test_synthesize_tree(cli, data_dir):
    """Test the strategy set of the hand-built tree."""
    code, out, _ = cli("synthesize", "--tree", data_dir / "history_tree.json")
    assert code == 0
    report = json.loads(out)
    assert report["all_admissible"] is False
    nodes = {record["node"]: record["allowed"] for record in report["nodes"]}
    assert nodes[0] == [1, 15]
    assert nodes[7] == [8]
    assert report["root_pairs"] == [[2, "inf"], [3, "inf"], [5, "inf"]]
    assert report["strategy"]["budget"] == 10
    assert report["meta"]["criterion"] == "exact"


def test_synthesize_winning(cli, data_dir):
    """Test that the winning set keeps only the guaranteed route."""
    code, out, _ = cli(
        "synthesize",
        "--game",
        data_dir / "detour_game.json",
        "--budget",
        12,
        "--mode",
        "adm-win",
    )
    assert code == 0
    report = json.loads(out)
    assert report["root_pairs"] == [[3, 10]]
    assert report["nodes"][0]["allowed"] == [1]
    assert report["transducer"][0]["input"] is None


def test_synthesize_all_admissible(cli, data_dir):
    """Test the symbolic answer when no goal fits in the budget."""
    code, out, _ = cli("synthesize", "--game", data_dir / "detour_game.json", "--budget", 0)
    assert code == 0
    report = json.loads(out)
    assert report["all_admissible"] is True
    assert report["nodes"] == []


def test_rollout_adversarial(cli, data_dir):
    """Test the worst case of the extracted winner."""
    code, out, _ = cli(
        "rollout",
        "--game",
        data_dir / "detour_game.json",
        "--budget",
        12,
        "--mode",
        "adm-win",
        "--env",
        "adversarial",
    )
    assert code == 0
    report = json.loads(out)
    assert report["outcome"] == "goal-reached"
    assert report["total"] == 10
    assert len(report["steps"]) == 6
    assert report["transcript"][-1] == "goal-reached at v6 with payoff 10"


def test_rollout_saved_strategy(cli, data_dir, tmp_path):
    """Test rolling out a strategy written by synthesize."""
    synthesized = tmp_path / "set.json"
    cli(
        "synthesize",
        "--game",
        data_dir / "detour_game.json",
        "--budget",
        12,
        "--output",
        synthesized,
    )
    strategy = tmp_path / "strategy.json"
    strategy.write_text(json.dumps(json.loads(synthesized.read_text())["strategy"]))
    code, out, _ = cli(
        "rollout",
        "--game",
        data_dir / "detour_game.json",
        "--budget",
        12,
        "--strategy",
        strategy,
        "--env",
        "adversarial",
    )
    assert code == 0
    report = json.loads(out)
    assert report["outcome"] == "budget-exceeded"
    assert report["total"] == "inf"


def test_rollout_strategy_for_another_budget(cli, data_dir, tmp_path, error_response):
    """Test that a saved strategy must match the arena budget."""
    strategy = tmp_path / "strategy.json"
    strategy.write_text(json.dumps({"budget": 11, "choices": {"0": 1}}))
    code, out, err = cli(
        "rollout",
        "--game",
        data_dir / "detour_game.json",
        "--budget",
        12,
        "--strategy",
        strategy,
    )
    assert code == 1
    assert out == ""
    response = error_response(err)
    assert response.kind == "ArtifactError"
    assert "budget 11" in response.detail


def test_rollout_cooperative(cli, data_dir):
    """Test that a helpful Env rewards the optimistic member."""
    code, out, _ = cli(
        "rollout", "--game", data_dir / "detour_game.json", "--budget", 12, "--env", "cooperative"
    )
    assert code == 0
    assert json.loads(out)["total"] == 1


def test_rollout_scripted(cli, data_dir):
    """Test a scripted Env through the cheap branch."""
    code, out, _ = cli(
        "rollout",
        "--game",
        data_dir / "detour_game.json",
        "--budget",
        12,
        "--mode",
        "adm-win",
        "--env",
        "scripted",
        "--script",
        0,
        1,
        0,
    )
    assert code == 0
    assert json.loads(out)["total"] == 3


def test_rollout_script_exhausted(cli, data_dir, error_response):
    """Test that a short script exits with 1."""
    code, _, err = cli(
        "rollout",
        "--game",
        data_dir / "detour_game.json",
        "--budget",
        12,
        "--mode",
        "adm-win",
        "--env",
        "scripted",
        "--script",
        0,
    )
    assert code == 1
    assert error_response(err).kind == "ScriptExhausted"


def test_rollout_step_limit(cli, data_dir):
    """Test that the step limit cuts a rollout short."""
    code, out, _ = cli(
        "rollout",
        "--game",
        data_dir / "detour_game.json",
        "--budget",
        12,
        "--env",
        "adversarial",
        "--max-steps",
        5,
    )
    assert code == 0
    report = json.loads(out)
    assert report["outcome"] == "step-limit"
    assert report["total"] == 3
