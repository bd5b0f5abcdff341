"""Print the invariants and statement table for a shipped fixture family."""

import argparse
from dataclasses import dataclass

from valinv.cli import fixture_names, load_fixture
from valinv.extension import ExtensionRecord, family_check


@dataclass
class ExampleConfig:
    fixture: str = "paper-example-8-not-9"


def run(cfg: ExampleConfig) -> str:
    fx = load_fixture(cfg.fixture)
    report = family_check([ExtensionRecord.from_json(r) for r in fx["records"]])
    lines = [fx.get("description", ""), ""]
    lines.append(f"{'record':<12}{'e':>4}{'eps':>5}{'f':>4}{'d':>4}  statements 1..8")
    for p in report.profiles:
        marks = " ".join(t.value[0].upper() for _, t in sorted(p.truth.items()))
        d = "-" if p.d is None else p.d
        lines.append(f"{p.name:<12}{p.e:>4}{p.epsilon:>5}{p.f:>4}{d:>4}  {marks}")
    lines.append("")
    lines.append(f"statement 9: {report.s9.value}")
    for v in report.violations:
        lines.append(f"violated: {v['arrow']} ({v['detail']})")
    if report.consistent:
        lines.append("no contradictions")
    return "\n".join(lines)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fixture", default=ExampleConfig.fixture, choices=fixture_names())
    print(run(ExampleConfig(**vars(parser.parse_args()))))


if __name__ == "__main__":
    main()
