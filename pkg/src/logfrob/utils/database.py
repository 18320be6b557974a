"""SQLite run history"""
import sqlite3
import json
import threading
import os
from contextlib import contextmanager

DEFAULT_DB_PATH = "/tmp/logfrob_runs.db"


class RunDatabase:
    """Thread-safe SQLite store with one row per CLI run"""

    def __init__(self, db_path=DEFAULT_DB_PATH):
        self.db_path = db_path
        self._tls = threading.local()
        self._create_schema()

    def _connection(self):
        """One connection per thread; rows come back as sqlite3.Row"""
        conn = getattr(self._tls, "conn", None)
        if conn is None:
            conn = sqlite3.connect(self.db_path, check_same_thread=False, timeout=30.0)
            conn.row_factory = sqlite3.Row
            self._tls.conn = conn
        return conn

    @contextmanager
    def _cursor(self):
        """Cursor that commits on success and rolls back on error"""
        conn = self._connection()
        cursor = conn.cursor()
        try:
            yield cursor
            conn.commit()
        except Exception:
            conn.rollback()
            raise

    def _create_schema(self):
        with self._cursor() as cursor:
            cursor.execute("""
                CREATE TABLE IF NOT EXISTS runs (
                    run_id TEXT PRIMARY KEY,
                    command TEXT NOT NULL,
                    spec_id TEXT,
                    status TEXT NOT NULL,
                    exit_code INTEGER,
                    report TEXT,
                    details TEXT,
                    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                    updated_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
                )
            """)

            cursor.execute("""
                CREATE INDEX IF NOT EXISTS idx_runs_status
                ON runs(status)
            """)

    def create_run(self, run_id, command, spec_id=None):
        """
        Create a new run entry in state 'running'.

        Returns:
            Dictionary with run information
        """
        with self._cursor() as cursor:
            cursor.execute("""
                INSERT INTO runs (run_id, command, spec_id, status)
                VALUES (?, ?, ?, ?)
            """, (run_id, command, spec_id, "running"))

        return {"run_id": run_id, "command": command, "spec_id": spec_id, "status": "running"}

    def finish_run(self, run_id, status, exit_code, report=None, details=None):
        """
        Record the outcome of a run.

        Returns:
            True if the run was found and updated, False otherwise
        """
        with self._cursor() as cursor:
            cursor.execute("""
                UPDATE runs
                SET status = ?, exit_code = ?, report = ?, details = ?,
                    updated_at = CURRENT_TIMESTAMP
                WHERE run_id = ?
            """, (status, exit_code, report, json.dumps(details, sort_keys=True) if details is not None else None, run_id))

            return cursor.rowcount > 0

    def get_run(self, run_id):
        """
        Get a specific run by ID.

        Returns:
            Dictionary with run information or None if not found
        """
        with self._cursor() as cursor:
            cursor.execute("""
                SELECT run_id, command, spec_id, status, exit_code, report, details
                FROM runs
                WHERE run_id = ?
            """, (run_id,))

            row = cursor.fetchone()
        if row is None:
            return None
        run = dict(row)
        if run["details"]:
            run["details"] = json.loads(run["details"])
        return run

    def recent_runs(self, limit=20):
        """Most recent runs first."""
        with self._cursor() as cursor:
            cursor.execute("""
                SELECT run_id, command, spec_id, status, exit_code
                FROM runs
                ORDER BY created_at DESC, rowid DESC
                LIMIT ?
            """, (limit,))
            return [dict(row) for row in cursor.fetchall()]

    def get_next_run_id(self):
        """
        Get the next run ID (sequential).

        Returns:
            Next run ID as string
        """
        with self._cursor() as cursor:
            cursor.execute("SELECT COUNT(*) as count FROM runs")
            row = cursor.fetchone()
            return f"run-{row['count'] + 1}"

    def close(self):
        """Close this thread's connection"""
        conn = getattr(self._tls, "conn", None)
        if conn is not None:
            conn.close()
            self._tls.conn = None


_db_instance = None
_db_lock = threading.Lock()


def get_database(db_path=None):
    """
    Get the global database instance (singleton).

    Args:
        db_path: Path to database file (only used on first call)

    Returns:
        RunDatabase instance
    """
    global _db_instance

    if _db_instance is None:
        with _db_lock:
            if _db_instance is None:
                if db_path is None:
                    db_path = os.environ.get('LOGFROB_DB', DEFAULT_DB_PATH)
                _db_instance = RunDatabase(db_path)

    return _db_instance


def reset_database():
    """Drop the singleton so the next get_database() reopens (tests point LOGFROB_DB at tmp dirs)."""
    global _db_instance
    with _db_lock:
        if _db_instance is not None:
            _db_instance.close()
        _db_instance = None
