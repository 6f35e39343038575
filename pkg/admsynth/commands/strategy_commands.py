import argparse
import logging

from admsynth.commands.output import (
    add_arena_arguments,
    add_output_argument,
    emit,
    load_arena,
    meta,
)
from admsynth.config import RunConfig
from admsynth.repositories.artifact_repository import load_model
from admsynth.schemas.strategy import (
    StrategySetReport,
    TraceReport,
    TraceStepRecord,
    TreeStrategySpec,
)
from admsynth.services.arena_service import AcvalMethod, solve_tree
from admsynth.services.errors import ArtifactError
from admsynth.services.rollout_service import (
    EnvPolicy,
    EnvPolicyKind,
    format_transcript,
    rollout,
)
from admsynth.services.synthesis_service import (
    ExtractionPolicy,
    SynthesisCriterion,
    SynthesisMode,
    TreeStrategy,
    extract_strategy,
    strategy_records,
    synthesize,
    transducer_rows,
)

logger = logging.getLogger(__name__)


def _add_synthesis_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--mode", choices=[m.value for m in SynthesisMode], help="adm or adm-win"
    )
    parser.add_argument(
        "--criterion",
        choices=[c.value for c in SynthesisCriterion],
        help="Allowed-choice test (default exact)",
    )
    parser.add_argument(
        "--acval", choices=[m.value for m in AcvalMethod], help="acVal method"
    )
    parser.add_argument(
        "--policy",
        choices=[p.value for p in ExtractionPolicy],
        help="How the concrete member is extracted",
    )
    parser.add_argument("--seed", type=int, help="Seed for random choices")


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "synthesize", help="Compute the admissible strategy set"
    )
    add_arena_arguments(parser)
    _add_synthesis_arguments(parser)
    add_output_argument(parser)

    parser = subparsers.add_parser(
        "rollout", help="Play a strategy against an Env policy"
    )
    add_arena_arguments(parser)
    _add_synthesis_arguments(parser)
    parser.add_argument("--strategy", help="Tree strategy JSON; synthesized if omitted")
    parser.add_argument(
        "--env", choices=[k.value for k in EnvPolicyKind], help="Env behaviour"
    )
    parser.add_argument(
        "--script", type=int, nargs="*", help="Env actions for a scripted rollout"
    )
    parser.add_argument("--max-steps", dest="max_steps", type=int, help="Step limit")
    add_output_argument(parser)


def _synthesis_meta(config: RunConfig, budget: int) -> dict:
    return meta(
        config,
        budget=budget,
        mode=config.mode.value,
        criterion=config.criterion.value,
        acval=config.acval.value,
        policy=config.policy.value,
    )


def synthesize_strategies(config: RunConfig) -> int:
    """Synthesize a strategy set, its transducer and one extracted member."""
    t, _ = load_arena(config)
    vt = solve_tree(t, config.acval)
    s = synthesize(t, vt, config.mode, config.criterion)
    member = extract_strategy(s, config.policy, config.seed)
    report = StrategySetReport(
        meta=_synthesis_meta(config, t.budget),
        all_admissible=s.all_admissible,
        nodes=strategy_records(s),
        transducer=transducer_rows(s),
        root_pairs=[[low.to_json(), high.to_json()] for low, high in s.root_pairs()],
        strategy=TreeStrategySpec(budget=t.budget, choices=member.choices),
    )
    emit(config, report)
    return 0


def _env_policy(config: RunConfig) -> EnvPolicy:
    if config.env is EnvPolicyKind.RANDOM:
        return EnvPolicy.random(config.seed)
    if config.env is EnvPolicyKind.SCRIPTED:
        return EnvPolicy.scripted(config.script)
    return EnvPolicy(config.env)


def rollout_strategy(config: RunConfig) -> int:
    """Roll out a given or freshly extracted strategy."""
    t, g = load_arena(config)
    if config.strategy:
        spec = load_model(config.strategy, TreeStrategySpec)
        if spec.budget is not None and spec.budget != t.budget:
            raise ArtifactError(
                f"Strategy {config.strategy} was built for budget {spec.budget}, "
                f"the arena has budget {t.budget}"
            )
        sigma = TreeStrategy(choices=spec.choices)
    else:
        vt = solve_tree(t, config.acval)
        s = synthesize(t, vt, config.mode, config.criterion)
        sigma = extract_strategy(s, config.policy, config.seed)
    trace = rollout(t, sigma, _env_policy(config), config.max_steps)
    report = TraceReport(
        meta=dict(_synthesis_meta(config, t.budget), env=config.env.value),
        outcome=trace.outcome.value,
        total=trace.total.to_json(),
        final_node=trace.final_node,
        steps=[
            TraceStepRecord(
                node=step.node,
                state=step.state,
                actor=step.actor.value,
                action=step.action,
                cost=step.cost,
            )
            for step in trace.steps
        ],
        transcript=format_transcript(t, trace, g),
    )
    logger.info(f"Rollout ended with {trace.outcome.value}, payoff {trace.total}")
    emit(config, report)
    return 0


HANDLERS = {"synthesize": synthesize_strategies, "rollout": rollout_strategy}
