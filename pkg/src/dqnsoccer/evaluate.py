"""Round-robin evaluation against a roster of opponents.

Each opponent plays a block of seeded matches; the report prints one row
per opponent with the aggregate score and verdict, plus per-match win/loss
counts. Seeds are derived from a base seed so a report is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass

from dqnsoccer.config import AppConfig
from dqnsoccer.match import MatchResult, PolicyFactory, run_match


@dataclass(frozen=True)
class OpponentRow:
    name: str
    goals_for: int
    goals_against: int
    verdict: str
    matches: tuple[MatchResult, ...]


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[OpponentRow, ...]
    matches_played: int
    wins: int
    losses: int
    ties: int

    def format_table(self) -> str:
        width = max((len(r.name) for r in self.rows), default=8)
        lines = [f"{'Opponent':<{width + 10}}  Score   Victory"]
        lines.append("-" * len(lines[0]))
        for row in self.rows:
            lines.append(
                f"Ours vs {row.name:<{width}}    {row.goals_for}:{row.goals_against}   {row.verdict}"
            )
        lines.append("-" * len(lines[0 if len(lines) < 2 else 1]))
        lines.append(
            f"matches={self.matches_played} wins={self.wins} losses={self.losses} ties={self.ties}"
        )
        return "\n".join(lines)


def evaluate(
    make_ours: PolicyFactory,
    opponents: list[tuple[str, PolicyFactory]],
    n_matches: int,
    base_seed: int,
    cfg: AppConfig,
) -> EvalReport:
    if n_matches < 1:
        raise ValueError("need at least one match per opponent")
    rows = []
    wins = losses = ties = 0
    for block, (name, make_opp) in enumerate(opponents):
        results = []
        for i in range(n_matches):
            seed = base_seed + block * n_matches + i
            results.append(run_match(make_ours, make_opp, cfg, seed))
        gf = sum(r.home_goals for r in results)
        ga = sum(r.away_goals for r in results)
        wins += sum(1 for r in results if r.outcome == "Win")
        losses += sum(1 for r in results if r.outcome == "Lose")
        ties += sum(1 for r in results if r.outcome == "Tie")
        rows.append(
            OpponentRow(name, gf, ga, MatchResult.outcome_of(gf, ga), tuple(results))
        )
    return EvalReport(
        rows=tuple(rows),
        matches_played=n_matches * len(opponents),
        wins=wins,
        losses=losses,
        ties=ties,
    )
