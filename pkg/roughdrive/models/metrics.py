"""
Run Metrics Model
"""
from datetime import datetime
from threading import Lock

import psutil


class RunMetrics:
    """Track experiment outcomes, timings and artifacts of one run"""

    def __init__(self):
        self.lock = Lock()
        self.experiments_count = 0
        self.passed_experiments = 0
        self.total_experiment_time = 0.0
        self.artifacts = []
        self.start_time = datetime.now()

    def record_experiment(self, passed=True, seconds=0.0):
        """Record one finished experiment"""
        with self.lock:
            self.experiments_count += 1
            if passed:
                self.passed_experiments += 1
            self.total_experiment_time += seconds

    def record_artifact(self, path):
        with self.lock:
            self.artifacts.append(str(path))

    def get_metrics(self):
        """Get current metrics"""
        with self.lock:
            uptime = (datetime.now() - self.start_time).total_seconds()
            pass_rate = (self.passed_experiments / max(self.experiments_count, 1)) * 100
            memory_mb = psutil.Process().memory_info().rss / (1024 * 1024)

            return {
                'uptime_seconds': round(uptime, 2),
                'total_experiments': self.experiments_count,
                'passed_experiments': self.passed_experiments,
                'pass_rate': round(pass_rate, 2),
                'experiment_time_seconds': round(self.total_experiment_time, 2),
                'artifacts_written': len(self.artifacts),
                'memory_rss_mb': round(memory_mb, 1),
            }
