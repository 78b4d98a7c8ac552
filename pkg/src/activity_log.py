# ═══════════════════════════════════════════════════════════════════════════
# IMPORTS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Activity logging system imports
#
# External libraries: csv, datetime, pathlib
# ═══════════════════════════════════════════════════════════════════════════

import csv
from datetime import datetime
from pathlib import Path


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 1: CONSTANTS & FILE PATHS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Location and layout of the activity log
#
# Key components:
# - DATA_DIR: Directory for log files
# - LOG_FILE: Activity log CSV
# - LOG_HEADER: Column names, one row per command run
# ═══════════════════════════════════════════════════════════════════════════

DATA_DIR = Path(__file__).parent / "data"
LOG_FILE = DATA_DIR / "activity.log"
LOG_HEADER = ["No.", "Date", "Time", "Command", "Activity", "Additional Info", "Flagged"]


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 2: LOGGING FUNCTIONS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Core logging functionality
#
# Key components:
# - log_activity(): Append one activity row
#
# Note: The log never feeds back into computed results
# ═══════════════════════════════════════════════════════════════════════════


def _next_log_number():
    logs = get_all_logs()
    return logs[-1]["no"] + 1 if logs else 1


def log_activity(command, activity, additional_info="", flagged=False):
    """
    Log an activity to the activity log file.

    Log structure: No. | Date | Time | Command | Activity | Additional Info | Flagged

    Args:
        command (str): CLI subcommand (e.g. "tau-min")
        activity (str): Description of activity
        additional_info (str): Extra information (optional)
        flagged (bool): Mark noteworthy outcomes such as a diverged bound,
            a rejected input or an MSE outside the expected band

    Examples:
        log_activity("tau-min", "Computed tau_min", "atom=Cd layers=100")
        log_activity("crb", "Bound diverged", "tau=1.2e5", flagged=True)
    """
    LOG_FILE.parent.mkdir(parents=True, exist_ok=True)

    log_number = _next_log_number()

    now = datetime.now()
    date_str = now.strftime("%d-%m-%Y")  # DD-MM-YYYY
    time_str = now.strftime("%H:%M:%S")  # HH:MM:SS

    new_file = not LOG_FILE.exists() or LOG_FILE.stat().st_size == 0
    with open(LOG_FILE, "a", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, quoting=csv.QUOTE_ALL, lineterminator="\n")
        if new_file:
            writer.writerow(LOG_HEADER)
        writer.writerow(
            [
                str(log_number),
                date_str,
                time_str,
                command,
                activity,
                additional_info,
                "Yes" if flagged else "No",
            ]
        )


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 3: LOG RETRIEVAL FUNCTIONS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Retrieve and filter logs
#
# Key components:
# - get_all_logs(): All rows as dictionaries
# - get_flagged_logs(): Only flagged rows
# ═══════════════════════════════════════════════════════════════════════════


def get_all_logs():
    """
    Retrieve all logs.

    Returns:
        list: List of log dictionaries (empty if the log is missing or unreadable)

    Example:
        for log in get_all_logs():
            print(f"{log['no']}: {log['command']} - {log['activity']}")
    """
    if not LOG_FILE.exists():
        return []

    try:
        with open(LOG_FILE, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            return [
                {
                    "no": int(row["No."]),
                    "date": row["Date"],
                    "time": row["Time"],
                    "command": row["Command"],
                    "activity": row["Activity"],
                    "additional_info": row["Additional Info"],
                    "flagged": row["Flagged"],
                }
                for row in reader
            ]

    except (OSError, KeyError, ValueError, csv.Error) as e:
        print(f"Error reading logs: {e}")
        return []


def get_flagged_logs():
    """
    Get only flagged logs.

    Returns:
        list: List of flagged log dictionaries
    """
    return [log for log in get_all_logs() if log["flagged"] == "Yes"]


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 4: LOG MANAGEMENT FUNCTIONS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Manage log state and display
#
# Key components:
# - clear_logs(): Delete the log file
# - display_logs(): Format and display logs in table
# ═══════════════════════════════════════════════════════════════════════════


def clear_logs():
    """
    Clear all logs.

    Returns:
        tuple: (success, message)
    """
    try:
        if LOG_FILE.exists():
            LOG_FILE.unlink()
        return True, "All logs cleared successfully"

    except OSError as e:
        return False, f"Error clearing logs: {e}"


def display_logs(logs, show_flagged_only=False):
    """
    Display logs in formatted table.

    Args:
        logs (list): List of log dictionaries
        show_flagged_only (bool): Filter flagged logs

    Example:
        display_logs(get_all_logs(), show_flagged_only=True)
    """
    if show_flagged_only:
        logs = [log for log in logs if log["flagged"] == "Yes"]

    if not logs:
        print("No logs found.")
        return

    col_widths = {
        "no": 5,
        "date": 12,
        "time": 10,
        "command": 12,
        "activity": 30,
        "additional_info": 50,
        "flagged": 7,
    }
    titles = {
        "no": "No.",
        "date": "Date",
        "time": "Time",
        "command": "Command",
        "activity": "Activity",
        "additional_info": "Additional Info",
        "flagged": "Flagged",
    }

    total_width = sum(col_widths.values()) + (len(col_widths) - 1) * 3  # " | "

    print("\n" + "=" * total_width)
    print(" | ".join(f"{titles[key]:<{width}}" for key, width in col_widths.items()))
    print("=" * total_width)

    for log in logs:
        print(" | ".join(f"{str(log[key]):<{width}}" for key, width in col_widths.items()))

    print("=" * total_width)
    print(f"Total logs: {len(logs)}")

    flagged_count = sum(1 for log in logs if log["flagged"] == "Yes")
    if flagged_count > 0:
        print(f"⚠️  Flagged activities: {flagged_count}")
