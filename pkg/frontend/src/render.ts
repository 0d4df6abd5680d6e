import * as THREE from 'three'
import type { StlMesh } from './stl'
import type { PartStatus, Pose } from './types'
import type { ViewBasis } from './drag'

/** What the app needs from a renderer; faked in tests (no WebGL there). */
export interface RenderPort {
  addPart(partId: string, mesh: StlMesh, pose: Pose): void
  addSlot(slotId: string, mesh: StlMesh, pose: Pose): void
  setPartPose(partId: string, pose: Pose): void
  setPartStatus(partId: string, status: PartStatus): void
  setSlotHighlight(slotId: string, on: boolean): void
  pickPart(clientX: number, clientY: number): string | null
  viewBasis(partId: string): ViewBasis
  flashPart(partId: string, color: 'red' | 'green'): void
}

const STATUS_COLORS: Record<PartStatus, number> = {
  free: 0x8899aa,
  grabbed: 0xffcc44,
  snapped: 0x44cc66,
  flagged_defective: 0xcc4444,
}

function geometryFrom(mesh: StlMesh): THREE.BufferGeometry {
  const geometry = new THREE.BufferGeometry()
  geometry.setAttribute('position', new THREE.BufferAttribute(mesh.positions, 3))
  geometry.setAttribute('normal', new THREE.BufferAttribute(mesh.normals, 3))
  return geometry
}

function applyPose(object: THREE.Object3D, pose: Pose): void {
  object.position.set(...pose.translation)
  const [w, x, y, z] = pose.rotation
  object.quaternion.set(x, y, z, w) // three uses (x, y, z, w)
}

export class ThreeRenderer implements RenderPort {
  private renderer: THREE.WebGLRenderer
  private scene = new THREE.Scene()
  private camera: THREE.PerspectiveCamera
  private raycaster = new THREE.Raycaster()
  private parts = new Map<string, THREE.Mesh>()
  private slots = new Map<string, THREE.Mesh>()

  constructor(private container: HTMLElement) {
    this.renderer = new THREE.WebGLRenderer({ antialias: true })
    this.renderer.setPixelRatio(Math.min(window.devicePixelRatio, 2))
    this.renderer.setSize(container.clientWidth, container.clientHeight)
    this.renderer.setClearColor(0x1a2230)
    container.appendChild(this.renderer.domElement)

    // millimeter world, Z up (poses come from the service in that frame)
    this.camera = new THREE.PerspectiveCamera(
      45,
      container.clientWidth / Math.max(1, container.clientHeight),
      1,
      20000,
    )
    this.camera.up.set(0, 0, 1)
    this.camera.position.set(0, -520, 360)
    this.camera.lookAt(0, 40, 0)

    this.scene.add(new THREE.HemisphereLight(0xffffff, 0x334455, 1.1))
    const sun = new THREE.DirectionalLight(0xffffff, 1.4)
    sun.position.set(200, -300, 500)
    this.scene.add(sun)
    const grid = new THREE.GridHelper(800, 16, 0x3a4a60, 0x2a3648)
    grid.rotation.x = Math.PI / 2
    this.scene.add(grid)

    window.addEventListener('resize', () => this.resize())
    this.renderer.setAnimationLoop(() => this.renderer.render(this.scene, this.camera))
  }

  addPart(partId: string, mesh: StlMesh, pose: Pose): void {
    const material = new THREE.MeshStandardMaterial({
      color: STATUS_COLORS.free,
      metalness: 0.1,
      roughness: 0.7,
    })
    const object = new THREE.Mesh(geometryFrom(mesh), material)
    object.userData.partId = partId
    applyPose(object, pose)
    this.parts.set(partId, object)
    this.scene.add(object)
  }

  addSlot(slotId: string, mesh: StlMesh, pose: Pose): void {
    // the target location rendered as a translucent green ghost
    const material = new THREE.MeshStandardMaterial({
      color: 0x22dd66,
      transparent: true,
      opacity: 0.28,
      depthWrite: false,
    })
    const object = new THREE.Mesh(geometryFrom(mesh), material)
    applyPose(object, pose)
    this.slots.set(slotId, object)
    this.scene.add(object)
  }

  setPartPose(partId: string, pose: Pose): void {
    const object = this.parts.get(partId)
    if (object) applyPose(object, pose)
  }

  setPartStatus(partId: string, status: PartStatus): void {
    const object = this.parts.get(partId)
    if (!object) return
    ;(object.material as THREE.MeshStandardMaterial).color.setHex(STATUS_COLORS[status])
  }

  setSlotHighlight(slotId: string, on: boolean): void {
    const object = this.slots.get(slotId)
    if (!object) return
    const material = object.material as THREE.MeshStandardMaterial
    material.opacity = on ? 0.55 : 0.28
    material.emissive.setHex(on ? 0x116633 : 0x000000)
  }

  pickPart(clientX: number, clientY: number): string | null {
    const rect = this.renderer.domElement.getBoundingClientRect()
    const ndc = new THREE.Vector2(
      ((clientX - rect.left) / rect.width) * 2 - 1,
      -((clientY - rect.top) / rect.height) * 2 + 1,
    )
    this.raycaster.setFromCamera(ndc, this.camera)
    const hits = this.raycaster.intersectObjects([...this.parts.values()], false)
    return hits.length > 0 ? (hits[0].object.userData.partId as string) : null
  }

  viewBasis(partId: string): ViewBasis {
    const object = this.parts.get(partId)
    const target = object ? object.position : new THREE.Vector3()
    const distance = this.camera.position.distanceTo(target)
    const heightPx = this.container.clientHeight || 1
    const worldHeight =
      2 * distance * Math.tan(THREE.MathUtils.degToRad(this.camera.fov / 2))
    const right = new THREE.Vector3()
    const up = new THREE.Vector3()
    const forward = new THREE.Vector3()
    this.camera.matrixWorld.extractBasis(right, up, forward)
    return {
      right: [right.x, right.y, right.z],
      up: [up.x, up.y, up.z],
      mmPerPixel: worldHeight / heightPx,
    }
  }

  flashPart(partId: string, color: 'red' | 'green'): void {
    const object = this.parts.get(partId)
    if (!object) return
    const material = object.material as THREE.MeshStandardMaterial
    material.emissive.setHex(color === 'red' ? 0xaa1111 : 0x11aa33)
    setTimeout(() => material.emissive.setHex(0x000000), 450)
  }

  private resize(): void {
    const { clientWidth, clientHeight } = this.container
    this.camera.aspect = clientWidth / Math.max(1, clientHeight)
    this.camera.updateProjectionMatrix()
    this.renderer.setSize(clientWidth, clientHeight)
  }
}
