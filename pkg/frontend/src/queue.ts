type Task = () => Promise<void>;

/**
 * Single in-flight task runner. A task submitted while one is running is
 * queued; submitting again replaces the queued task, so the latest
 * submission wins and intermediate ones are dropped.
 */
export class SubmitQueue {
  private inFlight = false;
  private queued: Task | null = null;
  private waiters: Array<() => void> = [];

  run(task: Task): void {
    if (this.inFlight) {
      this.queued = task;
      return;
    }
    this.inFlight = true;
    void task()
      .catch(() => {
        // task errors are the task's responsibility; the queue only sequences
      })
      .finally(() => {
        this.inFlight = false;
        const next = this.queued;
        this.queued = null;
        if (next) {
          this.run(next);
        } else {
          const waiters = this.waiters;
          this.waiters = [];
          waiters.forEach((resolve) => resolve());
        }
      });
  }

  /** Resolves once nothing is running or queued (tests await this). */
  idle(): Promise<void> {
    if (!this.inFlight && !this.queued) {
      return Promise.resolve();
    }
    return new Promise((resolve) => this.waiters.push(resolve));
  }
}
