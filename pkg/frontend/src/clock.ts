/** Session-relative millisecond clock with non-decreasing samples. */
export class SessionClock {
  private start: number
  private last = 0

  constructor(private nowFn: () => number = () => performance.now()) {
    this.start = this.nowFn()
  }

  next(): number {
    const t = Math.max(this.last, Math.round(this.nowFn() - this.start))
    this.last = t
    return t
  }
}
