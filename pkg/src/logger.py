"""
Run Logger - Records witness searches and suite runs to SQLite, and prints
[TAG] diagnostics on stderr
"""

import json
import sqlite3
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Union

from rich.console import Console

# Diagnostics never go to stdout; results there must stay byte-exact
console = Console(stderr=True, highlight=False, no_color=True, emoji=False, soft_wrap=True)

_verbose = False


def set_verbose(enabled: bool):
    global _verbose
    _verbose = enabled


def log(tag: str, message: str):
    """Print '[TAG] message' on stderr when verbose output is on"""
    if _verbose:
        console.print(f"[{tag}] {message}", markup=False)


def error(message: str):
    """Print an error on stderr regardless of verbosity"""
    console.print(f"error: {message}", markup=False)


class RunLogger:
    """Logs observa runs to SQLite for later review with 'observa log'"""

    def __init__(self, db_path: Union[str, Path]):
        db_path = Path(db_path)
        db_path.parent.mkdir(parents=True, exist_ok=True)
        self.db_path = db_path
        self._init_database()

    def _init_database(self):
        """Initialize the database schema"""
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()

        cursor.execute('''
            CREATE TABLE IF NOT EXISTS runs (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                timestamp TEXT NOT NULL,
                command TEXT NOT NULL,
                args TEXT,
                status TEXT NOT NULL,
                detail TEXT,
                elapsed REAL
            )
        ''')

        conn.commit()
        conn.close()

    def log_run(
        self,
        command: str,
        args: Dict,
        status: str,
        detail: Optional[str] = None,
        elapsed: Optional[float] = None
    ):
        """
        Log one run

        Args:
            command: Subcommand name (e.g., 'witness')
            args: Arguments as dict
            status: 'success', 'exhausted' or 'error'
            detail: Optional summary (claim outcome, suite counts)
            elapsed: Wall-clock seconds
        """
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()

        timestamp = datetime.now().isoformat()
        args_json = json.dumps(args, sort_keys=True, default=str)

        cursor.execute('''
            INSERT INTO runs (timestamp, command, args, status, detail, elapsed)
            VALUES (?, ?, ?, ?, ?, ?)
        ''', (timestamp, command, args_json, status, detail, elapsed))

        conn.commit()
        conn.close()

    def get_recent_runs(self, limit: int = 10) -> List[Dict]:
        """
        Get recent runs, newest first

        Args:
            limit: Number of entries to retrieve
        """
        conn = sqlite3.connect(self.db_path)
        conn.row_factory = sqlite3.Row
        cursor = conn.cursor()

        cursor.execute('''
            SELECT * FROM runs
            ORDER BY id DESC
            LIMIT ?
        ''', (limit,))

        rows = cursor.fetchall()
        conn.close()

        return [
            {
                'id': row['id'],
                'timestamp': row['timestamp'],
                'command': row['command'],
                'args': json.loads(row['args']) if row['args'] else {},
                'status': row['status'],
                'detail': row['detail'],
                'elapsed': row['elapsed'],
            }
            for row in rows
        ]

    def get_statistics(self) -> Dict:
        """Counts per status and per command"""
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()

        cursor.execute('SELECT COUNT(*) FROM runs')
        total = cursor.fetchone()[0]

        cursor.execute('SELECT status, COUNT(*) FROM runs GROUP BY status')
        status_counts = dict(cursor.fetchall())

        cursor.execute('''
            SELECT command, COUNT(*) as count
            FROM runs
            GROUP BY command
            ORDER BY count DESC, command
        ''')
        commands = cursor.fetchall()

        conn.close()

        return {
            'total_runs': total,
            'successful': status_counts.get('success', 0),
            'exhausted': status_counts.get('exhausted', 0),
            'failed': status_counts.get('error', 0),
            'commands': commands
        }
