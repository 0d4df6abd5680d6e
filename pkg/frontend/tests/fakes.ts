// Test doubles: an HTTP-level fake of the session service (so the real
// ServiceClient runs against it) and a recording render port.

import type { ViewBasis } from '../src/drag'
import type { RenderPort } from '../src/render'
import type { StlMesh } from '../src/stl'
import type {
  ComparisonReport,
  PartStateRec,
  PartStatus,
  Pose,
  SceneManifest,
  SessionEventRec,
} from '../src/types'

export const TARGET_A: Pose = { translation: [150, 0, 0], rotation: [1, 0, 0, 0] }
export const TARGET_B: Pose = { translation: [150, 150, 0], rotation: [1, 0, 0, 0] }
export const INITIAL_A: Pose = { translation: [-150, 0, 0], rotation: [1, 0, 0, 0] }
export const INITIAL_B: Pose = { translation: [-150, 150, 0], rotation: [1, 0, 0, 0] }

export const MANIFEST: SceneManifest = {
  scene_id: 'demo',
  parts: [
    { part_id: 'flange_a', mesh_asset: 'flange_a.stl', initial_pose: INITIAL_A },
    { part_id: 'flange_b', mesh_asset: 'flange_b.stl', initial_pose: INITIAL_B },
  ],
  slots: [
    { slot_id: 'slot_a', expected_part: 'flange_a', target_pose: TARGET_A },
    { slot_id: 'slot_b', expected_part: 'flange_b', target_pose: TARGET_B },
  ],
  par_time_ms: 30000,
}

export const REJECTION_REPORT: ComparisonReport = {
  threshold: 0.25,
  overall_pass: false,
  max_difference: 0.5555555555555556,
  worst_parameter: 'total_surface',
  parameters: [
    { parameter: 'total_surface', bim: 21600, scanned: 48600, relative_difference: 0.5555555555555556, pass: false },
    { parameter: 'normal_x', bim: 0.3333, scanned: 0.3333, relative_difference: 0, pass: true },
    { parameter: 'normal_y', bim: 0.3333, scanned: 0.3333, relative_difference: 0, pass: true },
    { parameter: 'normal_z', bim: 0.3333, scanned: 0.3333, relative_difference: 0, pass: true },
    { parameter: 'dim_x', bim: 60, scanned: 90, relative_difference: 0.3333333333333333, pass: false },
    { parameter: 'dim_y', bim: 60, scanned: 90, relative_difference: 0.3333333333333333, pass: false },
    { parameter: 'dim_z', bim: 60, scanned: 90, relative_difference: 0.3333333333333333, pass: false },
  ],
}

/** One valid binary STL triangle, enough for the parser and renderer. */
export function triangleStlBytes(): ArrayBuffer {
  const buffer = new ArrayBuffer(84 + 50)
  const view = new DataView(buffer)
  view.setUint32(80, 1, true)
  const coords = [0, 0, 0, 10, 0, 0, 0, 10, 0]
  for (let i = 0; i < 9; i++) view.setFloat32(84 + 12 + 4 * i, coords[i], true)
  return buffer
}

function dist(a: Pose, b: Pose): number {
  return Math.hypot(
    a.translation[0] - b.translation[0],
    a.translation[1] - b.translation[1],
    a.translation[2] - b.translation[2],
  )
}

interface FakePart {
  state: PartStatus
  pose: Pose
}

/**
 * In-memory twin of the session service for one scripted session:
 * flange_a conforms (snaps within 20 mm), flange_b is rejected with the
 * canned report. Speaks the wire protocol via a fetch-compatible
 * function, so the real ServiceClient is exercised.
 */
export class FakeService {
  parts: Record<string, FakePart> = {
    flange_a: { state: 'free', pose: INITIAL_A },
    flange_b: { state: 'free', pose: INITIAL_B },
  }
  lastSeq = 0
  ended = false
  endedAt = 0
  reject409Once = false
  requests: string[] = []

  fetch = async (input: string, init?: RequestInit): Promise<Response> => {
    const url = new URL(input, 'http://fake')
    const path = url.pathname
    this.requests.push(`${init?.method ?? 'GET'} ${path}`)

    if (path === '/scene/demo') return json(MANIFEST)
    if (path.startsWith('/assets/')) return new Response(triangleStlBytes())
    if (path === '/sessions' && init?.method === 'POST') {
      return json({ session_id: 's1', scene_id: 'demo' })
    }
    if (path === '/sessions/s1/events' && init?.method === 'POST') {
      return this.postEvents(JSON.parse(String(init.body)))
    }
    if (path === '/sessions/s1/state') return json(this.stateBody())
    if (path === '/sessions/s1/report') return json(this.reportBody())
    return json({ detail: `unknown ${path}` }, 404)
  }

  private postEvents(body: { seq: number; events: SessionEventRec[] }): Response {
    if (this.reject409Once) {
      this.reject409Once = false
      return json({ detail: 'injected conflict' }, 409)
    }
    if (body.seq <= this.lastSeq) return json({ detail: 'stale seq' }, 409)
    if (this.ended) return json({ detail: 'session ended' }, 409)
    this.lastSeq = body.seq

    const outcomes: (object | null)[] = []
    for (const event of body.events) {
      let outcome: object | null = null
      const part = event.part_id ? this.parts[event.part_id] : null
      if (event.kind === 'grab' && part) part.state = 'grabbed'
      if (event.kind === 'move' && part && event.pose) part.pose = event.pose
      if (event.kind === 'flag_defective' && part && part.state !== 'snapped') {
        part.state = 'flagged_defective'
      }
      if (event.kind === 'release' && part && event.part_id) {
        if (event.part_id === 'flange_b') {
          outcome = { kind: 'rejected_quality', report: REJECTION_REPORT }
          part.state = 'free'
        } else {
          const d = dist(part.pose, TARGET_A)
          if (d <= 20) {
            part.state = 'snapped'
            part.pose = TARGET_A
            outcome = { kind: 'snapped' }
          } else {
            part.state = 'free'
            outcome = { kind: 'out_of_range', distance_mm: d, angle_deg: 0 }
          }
        }
      }
      if (event.kind === 'end_session') {
        this.ended = true
        this.endedAt = event.timestamp_ms
      }
      outcomes.push(outcome)
    }
    return json({
      seq: body.seq,
      outcomes,
      warnings: body.events.map(() => null),
      status: this.ended ? 'ended' : 'active',
      parts: this.partsBody(),
    })
  }

  private partsBody(): PartStateRec[] {
    return Object.entries(this.parts).map(([part_id, p]) => ({
      part_id,
      state: p.state,
      pose: p.pose,
    }))
  }

  private stateBody() {
    return {
      session_id: 's1',
      scene_id: 'demo',
      status: this.ended ? 'ended' : 'active',
      clock_ms: this.endedAt,
      last_seq: this.lastSeq,
      parts: this.partsBody(),
    }
  }

  private reportBody() {
    const resolvedA = this.parts.flange_a.state === 'snapped'
    const resolvedB = this.parts.flange_b.state === 'flagged_defective'
    const accuracy = (Number(resolvedA) + Number(resolvedB)) / 2
    return {
      session_id: 's1',
      scene_id: 'demo',
      status: this.ended ? 'ended' : 'active',
      parts: [
        {
          part_id: 'flange_a',
          slot_id: 'slot_a',
          state: this.parts.flange_a.state,
          conforming: true,
          resolved_correctly: resolvedA,
          comparison: { ...REJECTION_REPORT, overall_pass: true },
        },
        {
          part_id: 'flange_b',
          slot_id: 'slot_b',
          state: this.parts.flange_b.state,
          conforming: false,
          resolved_correctly: resolvedB,
          comparison: REJECTION_REPORT,
        },
      ],
      score: this.ended
        ? {
            accuracy,
            elapsed_ms: this.endedAt,
            par_time_ms: 30000,
            grade: 100 * (0.7 * accuracy + 0.3 * Math.min(1, 30000 / Math.max(this.endedAt, 1))),
          }
        : null,
    }
  }
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  })
}

export class FakeRender implements RenderPort {
  addedParts = new Map<string, Pose>()
  addedSlots = new Map<string, Pose>()
  poses = new Map<string, Pose>()
  statuses = new Map<string, PartStatus>()
  highlights = new Map<string, boolean>()
  flashes: Array<[string, string]> = []
  nextPick: string | null = null

  addPart(partId: string, _mesh: StlMesh, pose: Pose): void {
    this.addedParts.set(partId, pose)
    this.poses.set(partId, pose)
  }

  addSlot(slotId: string, _mesh: StlMesh, pose: Pose): void {
    this.addedSlots.set(slotId, pose)
  }

  setPartPose(partId: string, pose: Pose): void {
    this.poses.set(partId, pose)
  }

  setPartStatus(partId: string, status: PartStatus): void {
    this.statuses.set(partId, status)
  }

  setSlotHighlight(slotId: string, on: boolean): void {
    this.highlights.set(slotId, on)
  }

  pickPart(): string | null {
    return this.nextPick
  }

  viewBasis(): ViewBasis {
    return { right: [1, 0, 0], up: [0, 0, 1], mmPerPixel: 1 }
  }

  flashPart(partId: string, color: 'red' | 'green'): void {
    this.flashes.push([partId, color])
  }
}

export function makeElements() {
  document.body.innerHTML = `
    <div id="banner" hidden></div>
    <div id="status-panel"></div>
    <button id="end-button">end session</button>
    <div id="rejection-panel" hidden></div>
    <div id="grade-panel" hidden></div>
  `
  return {
    statusPanel: document.getElementById('status-panel')!,
    rejectionPanel: document.getElementById('rejection-panel')!,
    gradePanel: document.getElementById('grade-panel')!,
    banner: document.getElementById('banner')!,
    endButton: document.getElementById('end-button') as HTMLButtonElement,
  }
}
