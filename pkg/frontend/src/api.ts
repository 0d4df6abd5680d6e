import type {
  BatchResponse,
  ReportResponse,
  SceneManifest,
  SessionEventRec,
  StateResponse,
} from './types'

export class HttpError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message)
    this.name = 'HttpError'
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>

/** Thin typed client over the session service; see PROTOCOL.md. */
export class ServiceClient {
  constructor(
    public base: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {
    this.base = base.replace(/\/+$/, '')
  }

  async createSession(sceneId: string): Promise<{ session_id: string; scene_id: string }> {
    return this.json('/sessions', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ scene_id: sceneId }),
    })
  }

  async fetchScene(sceneId: string): Promise<SceneManifest> {
    return this.json(`/scene/${encodeURIComponent(sceneId)}`)
  }

  async fetchAsset(name: string): Promise<ArrayBuffer> {
    const response = await this.fetchFn(`${this.base}/assets/${encodeURIComponent(name)}`)
    if (!response.ok) {
      throw new HttpError(response.status, `asset ${name}: HTTP ${response.status}`)
    }
    return response.arrayBuffer()
  }

  async postEvents(
    sessionId: string,
    seq: number,
    events: SessionEventRec[],
  ): Promise<BatchResponse> {
    return this.json(`/sessions/${encodeURIComponent(sessionId)}/events`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ seq, events }),
    })
  }

  async fetchState(sessionId: string): Promise<StateResponse> {
    return this.json(`/sessions/${encodeURIComponent(sessionId)}/state`)
  }

  async fetchReport(sessionId: string): Promise<ReportResponse> {
    return this.json(`/sessions/${encodeURIComponent(sessionId)}/report`)
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.base}${path}`, init)
    if (!response.ok) {
      let detail = `HTTP ${response.status}`
      try {
        const body = (await response.json()) as { detail?: unknown }
        if (body && body.detail !== undefined) detail = String(body.detail)
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new HttpError(response.status, detail)
    }
    return (await response.json()) as T
  }
}
