"""
Human-readable tables for --format table.
Uses rich library for terminal rendering.

Install: pip install rich
"""

import io
from typing import Any, Dict, List, Optional

try:
    from rich.console import Console
    from rich.table import Table
    HAS_RICH = True
except ImportError:
    HAS_RICH = False


def format_energy(value: Optional[Any]) -> str:
    """Energy or delta for display; missing values show as N/A."""
    if value is None:
        return "N/A"
    if isinstance(value, str):
        return value
    return f"{value:.10g}"


def format_flag(value: Optional[bool]) -> str:
    if value is None:
        return "-"
    return "[green]pass[/green]" if value else "[red]FAIL[/red]"


class TableRenderer:
    """Renders envelope payloads as rich tables into a string."""

    def __init__(self, width: int = 110):
        if not HAS_RICH:
            raise ImportError("rich library required for --format table: pip install rich")
        self.buffer = io.StringIO()
        self.console = Console(file=self.buffer, width=width, force_terminal=False,
                               color_system=None)

    def _params_table(self, params: Dict[str, Any]) -> 'Table':
        table = Table(title="Parameters", show_header=False)
        table.add_column("Key", style="cyan")
        table.add_column("Value", style="green")
        for key, value in params.items():
            table.add_row(key, str(value))
        return table

    def classify(self, params: Dict[str, Any], payload: Dict[str, Any]) -> str:
        self.console.print(self._params_table(params))
        table = Table(title="Representations")
        table.add_column("nu", justify="right", style="cyan")
        table.add_column("Kind", style="blue")
        table.add_column("Dim", justify="right")
        table.add_column("Energy", justify="right", style="yellow")
        table.add_column("Orbit / reason", max_width=50)
        for rep in payload['representations']:
            orbit = ", ".join(f"{v:g}" for v in rep['orbit'])
            if rep['orbit_unbounded']:
                orbit += f", ... ({rep['orbit_unbounded']})"
            table.add_row(f"{rep['nu']:g}", rep['kind'], str(rep['dim']),
                          format_energy(rep['energy']), orbit or rep['reason'])
        self.console.print(table)
        return self.buffer.getvalue()

    def spectrum(self, params: Dict[str, Any], payload: Dict[str, Any]) -> str:
        self.console.print(self._params_table(params))
        truncation = payload['truncation']
        table = Table(title=f"Spectrum ({payload['mode']}, "
                            f"{truncation['kind']} N={truncation['n_top']})")
        table.add_column("n", justify="right", style="cyan")
        table.add_column("E_n", justify="right", style="yellow")
        table.add_column("j end", justify="right")
        for line in payload['lines']:
            table.add_row(str(line['n']), format_energy(line['energy']), f"{line['j_end']:g}")
        self.console.print(table)
        return self.buffer.getvalue()

    def verify(self, params: Dict[str, Any], payload: Dict[str, Any]) -> str:
        self.console.print(self._params_table(params))
        grid = payload['grid']
        table = Table(title=f"Verification ({payload['scheme']}, "
                            f"grid ({grid['a']:g}, {grid['b']:g}) n={grid['n']})")
        table.add_column("n", justify="right", style="cyan")
        table.add_column("Algebraic", justify="right", style="yellow")
        table.add_column("Numeric", justify="right", style="yellow")
        table.add_column("Rel delta", justify="right")
        table.add_column("Result")
        for level in payload['levels']:
            table.add_row(str(level['n']), format_energy(level['e_algebraic']),
                          format_energy(level['e_numeric']), format_energy(level['rel_delta']),
                          format_flag(level['pass']))
        self.console.print(table)

        summary = Table(title="Checks", show_header=False)
        summary.add_column("Check", style="cyan")
        summary.add_column("Value")
        counts = payload['counts']
        summary.add_row("Bound states (algebraic / numeric)",
                        f"{counts['algebraic']} / {counts['numeric']}")
        summary.add_row("Count check", format_flag(counts['pass'] if counts['checked'] else None))
        conv = payload['convergence']
        summary.add_row("Convergence ratio", format_energy(conv['ratio']))
        summary.add_row("Convergence check", format_flag(conv['pass'] if conv['checked'] else None))
        summary.add_row("Overall", format_flag(payload['pass']))
        self.console.print(summary)
        return self.buffer.getvalue()

    def runs(self, runs: List[Dict[str, Any]]) -> str:
        table = Table(title="Stored Runs")
        table.add_column("Run", justify="right", style="cyan")
        table.add_column("Command", style="blue")
        table.add_column("Family")
        table.add_column("Rows", justify="right", style="green")
        table.add_column("Passed")
        table.add_column("Created", style="magenta")
        for run in runs:
            table.add_row(str(run['run_id']), run['command'], run['family'] or '',
                          str(run['row_count']), format_flag(run['passed']),
                          run['created_at'])
        self.console.print(table)
        return self.buffer.getvalue()

    def run(self, run: Dict[str, Any]) -> str:
        """One stored run: its record, then the verification report or the sweep rows."""
        self.runs([run])
        if run.get('report') is not None:
            return self.verify(run['params'], run['report'])
        rows = run.get('rows') or []
        table = Table(title=f"Sweep Rows (run {run['run_id']})")
        columns = ('index', 'g', 'j', 'rep_kind', 'n_levels', 'ground_energy', 'verified',
                   'error')
        for column in columns:
            text_column = column in ('rep_kind', 'error')
            table.add_column(column, justify="left" if text_column else "right")
        for row in rows:
            cells = []
            for column in columns:
                value = row.get(column)
                if column == 'verified':
                    cells.append(format_flag(value))
                elif isinstance(value, float):
                    cells.append(format_energy(value))
                else:
                    cells.append("" if value is None else str(value))
            table.add_row(*cells)
        self.console.print(table)
        return self.buffer.getvalue()
