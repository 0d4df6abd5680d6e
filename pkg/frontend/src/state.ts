import type { PartStateRec, PartStatus, Pose, SceneManifest } from './types'
import { IDENTITY_POSE } from './types'

export interface PartView {
  partId: string
  status: PartStatus
  serverPose: Pose
  localPose: Pose | null // in-flight drag pose, discarded on every server update
}

/**
 * Client-side projection of the session: the server's last word on every
 * part, plus at most one locally dragged pose layered on top. The server
 * is authoritative: applying a server response resets poses exactly and
 * drops local overrides.
 */
export class SceneStore {
  parts = new Map<string, PartView>()
  order: string[] = []
  status: 'active' | 'ended' = 'active'
  onChange: (() => void) | null = null

  initFromManifest(manifest: SceneManifest): void {
    this.parts.clear()
    this.order = []
    for (const part of manifest.parts) {
      this.order.push(part.part_id)
      this.parts.set(part.part_id, {
        partId: part.part_id,
        status: 'free',
        serverPose: part.initial_pose ?? IDENTITY_POSE,
        localPose: null,
      })
    }
    this.emit()
  }

  applyServerParts(parts: PartStateRec[]): void {
    for (const record of parts) {
      const view = this.parts.get(record.part_id)
      if (!view) continue
      view.status = record.state
      view.serverPose = record.pose
      view.localPose = null
    }
    this.emit()
  }

  setLocalPose(partId: string, pose: Pose): void {
    const view = this.parts.get(partId)
    if (!view) return
    view.localPose = pose
    this.emit()
  }

  clearLocalPoses(): void {
    for (const view of this.parts.values()) view.localPose = null
    this.emit()
  }

  pose(partId: string): Pose {
    const view = this.parts.get(partId)
    if (!view) throw new Error(`unknown part ${partId}`)
    return view.localPose ?? view.serverPose
  }

  partStatus(partId: string): PartStatus {
    const view = this.parts.get(partId)
    if (!view) throw new Error(`unknown part ${partId}`)
    return view.status
  }

  private emit(): void {
    this.onChange?.()
  }
}
