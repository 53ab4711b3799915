"""Verdicts recorded by the acceptance tests, printed in the terminal summary."""
RESULTS: dict[int, tuple[str, str]] = {}


def record(num: int, verdict: str, detail: str) -> None:
    RESULTS[num] = (verdict, detail)
    print(f"criterion {num}: {verdict}  {detail}")
