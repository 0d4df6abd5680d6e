import { ServiceClient } from './api'
import { SessionClock } from './clock'
import { DragSession } from './drag'
import { BatchQueue } from './queue'
import { parseBinaryStl, type StlMesh } from './stl'
import { SceneStore } from './state'
import type { RenderPort } from './render'
import type { BatchResponse, ManifestSlot, SessionEventRec, SnapOutcome } from './types'
import { IDENTITY_POSE } from './types'
import {
  StatusPanel,
  clearRejectionTable,
  hideBanner,
  renderGrade,
  renderRejectionTable,
  showBanner,
} from './ui'

export interface AppElements {
  statusPanel: HTMLElement
  rejectionPanel: HTMLElement
  gradePanel: HTMLElement
  banner: HTMLElement
  endButton: HTMLButtonElement
}

/**
 * The assembly client: renders the scene, turns pointer drags into
 * event batches, and mirrors the server's state. It never computes
 * metrics or verdicts itself: every quality decision arrives in a
 * server response.
 */
export class AssemblyApp {
  store = new SceneStore()
  sessionId = ''
  private queue: BatchQueue | null = null
  private drag: DragSession | null = null
  private lastPointer: [number, number] = [0, 0]
  private slotByPart = new Map<string, ManifestSlot>()
  private panel: StatusPanel | null = null

  constructor(
    private client: ServiceClient,
    private render: RenderPort,
    private el: AppElements,
    private sceneId = 'demo',
    private clock = new SessionClock(),
  ) {}

  async start(): Promise<void> {
    hideBanner(this.el.banner)
    const manifest = await this.client.fetchScene(this.sceneId)
    this.store.initFromManifest(manifest)
    for (const slot of manifest.slots) {
      this.slotByPart.set(slot.expected_part, slot)
    }

    const meshes = new Map<string, StlMesh>()
    const assetMesh = async (name: string): Promise<StlMesh> => {
      let mesh = meshes.get(name)
      if (!mesh) {
        mesh = parseBinaryStl(await this.client.fetchAsset(name))
        meshes.set(name, mesh)
      }
      return mesh
    }

    for (const part of manifest.parts) {
      this.render.addPart(
        part.part_id,
        await assetMesh(part.mesh_asset),
        part.initial_pose ?? IDENTITY_POSE,
      )
    }
    for (const slot of manifest.slots) {
      const partAsset = manifest.parts.find((p) => p.part_id === slot.expected_part)
      const ghostAsset = slot.bim_mesh_asset ?? partAsset?.mesh_asset
      if (!ghostAsset) continue
      this.render.addSlot(
        slot.slot_id,
        await assetMesh(ghostAsset),
        slot.target_pose ?? IDENTITY_POSE,
      )
    }

    const created = await this.client.createSession(this.sceneId)
    this.sessionId = created.session_id
    this.queue = new BatchQueue(
      this.client,
      this.sessionId,
      (response, events) => this.onBatchResponse(response, events),
      () => this.resync(),
      () => void this.resync(),
    )

    this.panel = new StatusPanel(this.el.statusPanel, this.store, (partId) =>
      this.flagDefective(partId),
    )
    this.el.endButton.addEventListener('click', () => this.endSession())
    this.store.onChange = () => this.syncView()
    this.syncView()
  }

  // ------------------------------------------------------------------
  // pointer interaction

  pointerDown(clientX: number, clientY: number): void {
    if (this.store.status === 'ended' || this.drag) return
    const partId = this.render.pickPart(clientX, clientY)
    if (!partId || this.store.partStatus(partId) !== 'free') return
    this.drag = new DragSession(partId, this.store.pose(partId), this.clock)
    this.lastPointer = [clientX, clientY]
    const slot = this.slotByPart.get(partId)
    if (slot) this.render.setSlotHighlight(slot.slot_id, true)
    this.store.setLocalPose(partId, this.drag.pose)
  }

  pointerMove(clientX: number, clientY: number, rotate: boolean): void {
    if (!this.drag) return
    const dx = clientX - this.lastPointer[0]
    const dy = clientY - this.lastPointer[1]
    this.lastPointer = [clientX, clientY]
    const basis = this.render.viewBasis(this.drag.partId)
    const pose = this.drag.pointerDelta(dx, dy, rotate, basis)
    this.store.setLocalPose(this.drag.partId, pose)
  }

  pointerUp(): void {
    if (!this.drag) return
    const slot = this.slotByPart.get(this.drag.partId)
    if (slot) this.render.setSlotHighlight(slot.slot_id, false)
    const events = this.drag.finish()
    this.drag = null
    this.queue?.post(events)
    // the local pose stays until the server answers; its response is
    // authoritative and replaces every pose exactly
  }

  get dragging(): boolean {
    return this.drag !== null
  }

  // ------------------------------------------------------------------
  // actions

  flagDefective(partId: string): void {
    if (this.store.status === 'ended') return
    this.queue?.post([
      { timestamp_ms: this.clock.next(), kind: 'flag_defective', part_id: partId, pose: null },
    ])
  }

  endSession(): void {
    if (this.store.status === 'ended') return
    this.queue?.post([
      { timestamp_ms: this.clock.next(), kind: 'end_session', part_id: null, pose: null },
    ])
  }

  /** Refetch server state when idle; cheap stand-in for push updates. */
  async poll(): Promise<void> {
    if (!this.queue || this.drag || this.queue.inFlight || this.store.status === 'ended') return
    const state = await this.client.fetchState(this.sessionId)
    this.store.status = state.status
    this.store.applyServerParts(state.parts)
    if (state.status === 'ended') await this.showFinalGrade()
  }

  async drainBatches(): Promise<void> {
    await this.queue?.drain()
  }

  // ------------------------------------------------------------------
  // server responses

  private onBatchResponse(response: BatchResponse, events: SessionEventRec[]): void {
    this.store.status = response.status
    this.store.applyServerParts(response.parts)
    response.outcomes.forEach((outcome, i) => {
      if (outcome) this.showOutcome(events[i]?.part_id ?? '', outcome)
    })
    if (response.status === 'ended') {
      void this.showFinalGrade()
    }
  }

  private showOutcome(partId: string, outcome: SnapOutcome): void {
    if (outcome.kind === 'snapped') {
      this.render.flashPart(partId, 'green')
      clearRejectionTable(this.el.rejectionPanel)
    } else if (outcome.kind === 'rejected_quality') {
      this.render.flashPart(partId, 'red')
      renderRejectionTable(this.el.rejectionPanel, partId, outcome.report)
    }
    // out_of_range: the part simply stays where it was dropped
  }

  private async showFinalGrade(): Promise<void> {
    const report = await this.client.fetchReport(this.sessionId)
    if (report.score) renderGrade(this.el.gradePanel, report.score)
    this.el.endButton.disabled = true
  }

  /** 409 recovery: the server state wins, local poses are discarded. */
  private async resync(): Promise<void> {
    this.drag = null
    const state = await this.client.fetchState(this.sessionId)
    if (this.queue) this.queue.lastSeq = state.last_seq
    this.store.status = state.status
    this.store.clearLocalPoses()
    this.store.applyServerParts(state.parts)
    if (state.status === 'ended') await this.showFinalGrade()
  }

  // ------------------------------------------------------------------

  private syncView(): void {
    for (const partId of this.store.order) {
      this.render.setPartPose(partId, this.store.pose(partId))
      this.render.setPartStatus(partId, this.store.partStatus(partId))
    }
    this.panel?.update()
  }
}

export function connectionBanner(el: AppElements, error: unknown, retry: () => void): void {
  const message = error instanceof Error ? error.message : String(error)
  showBanner(el.banner, `cannot reach the session service: ${message}`, retry)
}
