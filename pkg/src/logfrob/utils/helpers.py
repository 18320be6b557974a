"""Console output and per-run logging"""
import os
import sys
import time
import threading


def safe_print(msg, stream=None):
    """Print with handling for surrogate characters that can't be encoded"""
    stream = stream or sys.stdout
    try:
        print(msg, file=stream)
    except UnicodeEncodeError:
        safe_msg = msg.encode('utf-8', errors='replace').decode('utf-8')
        print(safe_msg, file=stream)
    stream.flush()


def null_log(msg):
    """Default log_func for library calls"""


def make_logger(run_id, log_dir=None, echo=True):
    """
    Build the thread-safe log closure handed to long-running operations.

    Args:
        run_id: Identifier written into every line and used as the log file name
        log_dir: Directory for ``<run_id>.log``; None disables the file
        echo: If True, lines are echoed to stderr (stdout carries reports)

    Returns:
        Tuple of (log function, path to the log file or None)
    """
    logfile = None
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        logfile = os.path.join(log_dir, f"{run_id}.log")

    log_lock = threading.Lock()

    def log(msg):
        timestamp = time.strftime("%Y-%m-%d %H:%M:%S")
        formatted_msg = f"[{timestamp}] [{run_id}] {msg}"
        with log_lock:
            if echo:
                safe_print(formatted_msg, stream=sys.stderr)
            if logfile:
                with open(logfile, "a", encoding="utf-8", errors="replace") as f:
                    f.write(formatted_msg + "\n")
                    f.flush()

    return log, logfile
