import { HttpError, ServiceClient } from './api'
import type { BatchResponse, SessionEventRec } from './types'

/**
 * Serializes event batches to the server: at most one request is in
 * flight, later batches queue behind it. Sequence numbers increase per
 * accepted batch; a 409 (stale seq, ordering conflict, session ended)
 * triggers the caller's resync hook and drops the failed batch.
 */
export class BatchQueue {
  private pending: SessionEventRec[][] = []
  private inflight = false
  private seq: number

  constructor(
    private client: ServiceClient,
    private sessionId: string,
    private onResponse: (response: BatchResponse, events: SessionEventRec[]) => void,
    private onConflict: () => Promise<void>,
    private onError: (error: unknown) => void = () => {},
    lastSeq = 0,
  ) {
    this.seq = lastSeq
  }

  get inFlight(): boolean {
    return this.inflight
  }

  set lastSeq(value: number) {
    this.seq = value
  }

  post(events: SessionEventRec[]): void {
    if (events.length === 0) return
    this.pending.push(events)
    void this.pump()
  }

  /** Resolves when everything queued so far has been sent or dropped. */
  async drain(): Promise<void> {
    while (this.inflight || this.pending.length > 0) {
      await new Promise((resolve) => setTimeout(resolve, 1))
    }
  }

  private async pump(): Promise<void> {
    if (this.inflight) return
    const events = this.pending.shift()
    if (!events) return
    this.inflight = true
    try {
      const response = await this.client.postEvents(this.sessionId, this.seq + 1, events)
      this.seq = response.seq
      this.onResponse(response, events)
    } catch (error) {
      if (error instanceof HttpError && error.status === 409) {
        await this.onConflict()
      } else {
        this.onError(error)
      }
    } finally {
      this.inflight = false
      void this.pump()
    }
  }
}
