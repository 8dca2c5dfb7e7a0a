"""
DuckDB result store for sweeps and verification runs.
"""

import json
from datetime import datetime
from typing import Any, Dict, List, Optional

try:
    import duckdb
except ImportError:
    raise ImportError("DuckDB required: pip install duckdb")

from .envelope import sanitize
from .models import SWEEP_COLUMNS, SweepRow, VerificationReport
from .errors import InvalidInputError


class ResultStore:
    """Persistent store; one row in `runs` per invocation that wrote results."""

    def __init__(self, db_path: str):
        self.db_path = db_path
        self.conn = duckdb.connect(db_path)
        self._init_schema()

    def _init_schema(self):
        self.conn.execute("""
            CREATE TABLE IF NOT EXISTS runs (
                run_id INTEGER PRIMARY KEY,
                command VARCHAR,
                family VARCHAR,
                params JSON,
                row_count INTEGER,
                passed BOOLEAN,
                created_at TIMESTAMP
            )
        """)
        self.conn.execute("CREATE SEQUENCE IF NOT EXISTS run_seq START 1")

        self.conn.execute("""
            CREATE TABLE IF NOT EXISTS sweep_rows (
                run_id INTEGER,
                idx INTEGER,
                family VARCHAR,
                g DOUBLE,
                j DOUBLE,
                rep_kind VARCHAR,
                nu DOUBLE,
                dim VARCHAR,
                rep_energy DOUBLE,
                n_levels INTEGER,
                ground_energy DOUBLE,
                special_j DOUBLE,
                verified BOOLEAN,
                max_rel_delta DOUBLE,
                error VARCHAR,
                PRIMARY KEY (run_id, idx)
            )
        """)

        self.conn.execute("""
            CREATE TABLE IF NOT EXISTS verification_runs (
                run_id INTEGER PRIMARY KEY,
                family VARCHAR,
                j DOUBLE,
                g DOUBLE,
                scheme VARCHAR,
                grid_a DOUBLE,
                grid_b DOUBLE,
                grid_n INTEGER,
                algebraic_count INTEGER,
                numeric_count INTEGER,
                convergence_ratio DOUBLE,
                max_rel_delta DOUBLE,
                passed BOOLEAN,
                report JSON
            )
        """)
        self.conn.execute("CREATE INDEX IF NOT EXISTS idx_sweep_family ON sweep_rows(family)")
        self.conn.commit()

    def start_run(self, command: str, family: str, params: Dict[str, Any]) -> int:
        run_id = self.conn.execute("SELECT nextval('run_seq')").fetchone()[0]
        self.conn.execute("""
            INSERT INTO runs (run_id, command, family, params, row_count, passed, created_at)
            VALUES (?, ?, ?, ?, 0, NULL, ?)
        """, [run_id, command, family, json.dumps(sanitize(params)), datetime.utcnow()])
        return int(run_id)

    def save_sweep_rows(self, run_id: int, rows: List[SweepRow]):
        records = [
            [run_id, r.index, r.family, r.g, r.j, r.rep_kind, r.nu,
             None if r.dim is None else str(r.dim), r.rep_energy, r.n_levels,
             r.ground_energy, r.special_j, r.verified, r.max_rel_delta, r.error]
            for r in rows
        ]
        if records:
            self.conn.executemany("""
                INSERT INTO sweep_rows VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
            """, records)
        verified = [r.verified for r in rows if r.verified is not None]
        passed = all(verified) if verified else None
        self.conn.execute("UPDATE runs SET row_count = ?, passed = ? WHERE run_id = ?",
                          [len(rows), passed, run_id])
        self.conn.commit()

    def save_verification(self, run_id: int, report: VerificationReport):
        grid = report.grid
        self.conn.execute("""
            INSERT INTO verification_runs VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
        """, [
            run_id, report.params.family.value, report.params.j, report.params.g,
            report.scheme.value, grid.a, grid.b, grid.n, report.algebraic_count,
            report.numeric_count, report.convergence_ratio, report.max_rel_delta,
            report.passed, json.dumps(sanitize(report.to_dict())),
        ])
        self.conn.execute("UPDATE runs SET row_count = ?, passed = ? WHERE run_id = ?",
                          [len(report.levels), report.passed, run_id])
        self.conn.commit()

    def list_runs(self) -> List[Dict[str, Any]]:
        result = self.conn.execute("""
            SELECT run_id, command, family, params, row_count, passed, created_at
            FROM runs ORDER BY run_id
        """).fetchall()
        cols = ['run_id', 'command', 'family', 'params', 'row_count', 'passed', 'created_at']
        runs = [dict(zip(cols, r)) for r in result]
        for run in runs:
            run['params'] = json.loads(run['params']) if run['params'] else {}
            run['created_at'] = str(run['created_at'])
        return runs

    def get_run(self, run_id: int) -> Optional[Dict[str, Any]]:
        """Run record plus its sweep rows or verification report."""
        runs = [r for r in self.list_runs() if r['run_id'] == run_id]
        if not runs:
            return None
        run = runs[0]
        if run['command'] == 'verify':
            row = self.conn.execute(
                "SELECT report FROM verification_runs WHERE run_id = ?", [run_id]).fetchone()
            run['report'] = json.loads(row[0]) if row else None
        else:
            run['rows'] = self.get_sweep_rows(run_id)
        return run

    def get_sweep_rows(self, run_id: int) -> List[Dict[str, Any]]:
        result = self.conn.execute("""
            SELECT idx, family, g, j, rep_kind, nu, dim, rep_energy, n_levels,
                   ground_energy, special_j, verified, max_rel_delta, error
            FROM sweep_rows WHERE run_id = ? ORDER BY idx
        """, [run_id]).fetchall()
        return [dict(zip(SWEEP_COLUMNS, r)) for r in result]

    def require_run(self, run_id: int) -> Dict[str, Any]:
        run = self.get_run(run_id)
        if run is None:
            raise InvalidInputError(f"no run with id {run_id} in {self.db_path}")
        return run

    def close(self):
        self.conn.close()
