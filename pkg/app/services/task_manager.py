import logging
import threading
import time

from app.config import Config
from app.services import report_service, suite_service

logger = logging.getLogger(__name__)

TASKS = {}
task_semaphore = threading.BoundedSemaphore(value=Config.MAX_RUNNING_TASKS)


class ServerBusyError(RuntimeError):
    pass


def start_suite_task(command, selector, budget, no_lifting=False):
    """Validates the selector up front, then runs the suite on a daemon thread."""
    suite, jobs = suite_service.build_jobs(command, selector, budget, no_lifting)

    if not task_semaphore.acquire(blocking=False):
        raise ServerBusyError(
            f"Server is busy (Max {Config.MAX_RUNNING_TASKS} tasks running). Please try again in a few minutes.")

    try:
        task_id = report_service.create_report_id()
        stop_event = threading.Event()

        TASKS[task_id] = {
            "status": "initializing",
            "suite": suite,
            "progress": 0,
            "total": len(jobs),
            "start_time": time.time(),
            "stop_event": stop_event,
            "message": "Starting suite...",
        }

        thread = threading.Thread(target=_worker, args=(task_id, suite, jobs, budget, stop_event))
        thread.daemon = True
        thread.start()

        return task_id

    except Exception:
        task_semaphore.release()
        raise


def _worker(task_id, suite, jobs, budget, stop_event):
    def progress_callback(completed, total):
        if task_id in TASKS:
            TASKS[task_id]["progress"] = completed
            TASKS[task_id]["total"] = total
            TASKS[task_id]["status"] = "processing"
            TASKS[task_id]["message"] = f"Finished {completed} of {total} check groups..."

    try:
        logger.info("[%s] starting %s", task_id, suite)
        report = suite_service.run_jobs(suite, jobs, budget, progress_callback, stop_event)

        status = "stopped" if stop_event.is_set() else "finished"
        report_service.save_report(task_id, report, {"status": status, "wall_time": report.wall_time})

        TASKS[task_id]["status"] = status
        TASKS[task_id]["passed"] = report.passed
        TASKS[task_id]["complete"] = report.complete
        TASKS[task_id]["message"] = "Process stopped by user." if status == "stopped" else "Complete"

    except Exception as e:
        if task_id in TASKS:
            TASKS[task_id]["status"] = "error"
            TASKS[task_id]["message"] = f"Error: {e}"
        logger.exception("[%s] suite %s crashed", task_id, suite)

    finally:
        def cleanup():
            TASKS.pop(task_id, None)

        timer = threading.Timer(300.0, cleanup)
        timer.daemon = True
        timer.start()

        try:
            task_semaphore.release()
        except ValueError:
            pass


def get_task_status(task_id):
    task = TASKS.get(task_id)
    if not task:
        return None
    status = {
        "status": task["status"],
        "suite": task["suite"],
        "progress": task["progress"],
        "total": task["total"],
        "message": task["message"],
        "start_time": task["start_time"],
    }
    if "passed" in task:
        status["passed"] = task["passed"]
        status["complete"] = task["complete"]
    return status


def stop_task(task_id):
    if task_id in TASKS:
        TASKS[task_id]["stop_event"].set()
        TASKS[task_id]["status"] = "stopping"
        return True
    return False
