import type { SessionClock } from './clock'
import type { Pose, SessionEventRec } from './types'
import { qAboutZ, qMultiply, qNormalize } from './quat'

/** Camera frame for mapping pixel deltas to world millimeters. */
export interface ViewBasis {
  right: [number, number, number]
  up: [number, number, number]
  mmPerPixel: number
}

export function translateInViewPlane(
  pose: Pose,
  basis: ViewBasis,
  dxPx: number,
  dyPx: number,
): Pose {
  // screen y grows downward, world "up" is the camera's up vector
  const s = basis.mmPerPixel
  const t = pose.translation
  return {
    translation: [
      t[0] + s * (dxPx * basis.right[0] - dyPx * basis.up[0]),
      t[1] + s * (dxPx * basis.right[1] - dyPx * basis.up[1]),
      t[2] + s * (dxPx * basis.right[2] - dyPx * basis.up[2]),
    ],
    rotation: pose.rotation,
  }
}

export function rotateAboutVertical(pose: Pose, dxPx: number, radPerPixel = 0.01): Pose {
  const q = qNormalize(qMultiply(qAboutZ(dxPx * radPerPixel), pose.rotation))
  return { translation: pose.translation, rotation: q }
}

/**
 * One pointer drag of one part, from grab to release. Collects the
 * event batch the server expects: [grab, move..., release], with
 * client timestamps and move events throttled to `throttleMs`.
 */
export class DragSession {
  readonly partId: string
  pose: Pose
  private events: SessionEventRec[] = []
  private lastMoveTs = -Infinity
  private moved = false

  constructor(
    partId: string,
    startPose: Pose,
    private clock: SessionClock,
    private throttleMs = 50,
  ) {
    this.partId = partId
    this.pose = startPose
    this.events.push({
      timestamp_ms: this.clock.next(),
      kind: 'grab',
      part_id: partId,
      pose: null,
    })
  }

  pointerDelta(dxPx: number, dyPx: number, rotate: boolean, basis: ViewBasis): Pose {
    this.pose = rotate
      ? rotateAboutVertical(this.pose, dxPx)
      : translateInViewPlane(this.pose, basis, dxPx, dyPx)
    this.moved = true
    const now = this.clock.next()
    if (now - this.lastMoveTs >= this.throttleMs) {
      this.recordMove(now)
    }
    return this.pose
  }

  /** Final event batch; always ends with the exact drop pose then release. */
  finish(): SessionEventRec[] {
    if (this.moved) {
      this.recordMove(this.clock.next())
    }
    this.events.push({
      timestamp_ms: this.clock.next(),
      kind: 'release',
      part_id: this.partId,
      pose: null,
    })
    return this.events
  }

  private recordMove(ts: number): void {
    this.events.push({
      timestamp_ms: ts,
      kind: 'move',
      part_id: this.partId,
      pose: this.pose,
    })
    this.lastMoveTs = ts
    this.moved = false
  }
}
