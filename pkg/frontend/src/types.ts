// Mirrors of the service wire format (see ../PROTOCOL.md).

export interface Pose {
  translation: [number, number, number]
  rotation: [number, number, number, number] // (w, x, y, z), unit
}

export const IDENTITY_POSE: Pose = { translation: [0, 0, 0], rotation: [1, 0, 0, 0] }

export type PartStatus = 'free' | 'grabbed' | 'snapped' | 'flagged_defective'

export interface PartStateRec {
  part_id: string
  state: PartStatus
  pose: Pose
}

export interface ParameterComparison {
  parameter: string
  bim: number
  scanned: number
  relative_difference: number
  pass: boolean
}

export interface ComparisonReport {
  threshold: number
  overall_pass: boolean
  max_difference: number
  worst_parameter: string
  parameters: ParameterComparison[]
}

export type SnapOutcome =
  | { kind: 'snapped' }
  | { kind: 'rejected_quality'; report: ComparisonReport }
  | { kind: 'out_of_range'; distance_mm: number; angle_deg: number }

export interface SessionScore {
  accuracy: number
  elapsed_ms: number
  par_time_ms: number
  grade: number
}

export type EventKind = 'grab' | 'move' | 'release' | 'flag_defective' | 'end_session'

export interface SessionEventRec {
  timestamp_ms: number
  kind: EventKind
  part_id: string | null
  pose: Pose | null
}

export interface ManifestPart {
  part_id: string
  mesh_asset: string
  initial_pose: Pose | null
}

export interface ManifestSlot {
  slot_id: string
  expected_part: string
  target_pose: Pose | null
  bim_mesh_asset?: string
  bim_metrics?: Record<string, number>
  threshold?: number
}

export interface SceneManifest {
  scene_id: string
  parts: ManifestPart[]
  slots: ManifestSlot[]
  par_time_ms: number
}

export interface BatchResponse {
  seq: number
  outcomes: (SnapOutcome | null)[]
  warnings: (string | null)[]
  status: 'active' | 'ended'
  parts: PartStateRec[]
}

export interface StateResponse {
  session_id: string
  scene_id: string
  status: 'active' | 'ended'
  clock_ms: number
  last_seq: number
  parts: PartStateRec[]
}

export interface ReportPart {
  part_id: string
  slot_id: string
  state: PartStatus
  conforming: boolean
  resolved_correctly: boolean
  comparison: ComparisonReport
}

export interface ReportResponse {
  session_id: string
  scene_id: string
  status: 'active' | 'ended'
  parts: ReportPart[]
  score: SessionScore | null
}
