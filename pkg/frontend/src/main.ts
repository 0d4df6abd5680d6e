import { ServiceClient } from './api'
import { AssemblyApp, connectionBanner, type AppElements } from './app'
import { ThreeRenderer } from './render'

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id)
  if (!node) throw new Error(`missing #${id}`)
  return node as T
}

const params = new URLSearchParams(location.search)
const serviceBase = params.get('service') ?? `${location.protocol}//${location.hostname}:8000`
const sceneId = params.get('scene') ?? 'demo'

const elements: AppElements = {
  statusPanel: el('status-panel'),
  rejectionPanel: el('rejection-panel'),
  gradePanel: el('grade-panel'),
  banner: el('banner'),
  endButton: el<HTMLButtonElement>('end-button'),
}

const viewport = el('viewport')
const render = new ThreeRenderer(viewport)
const app = new AssemblyApp(new ServiceClient(serviceBase), render, elements, sceneId)

function boot(): void {
  app.start().catch((error) => connectionBanner(elements, error, boot))
}
boot()

let rotateHeld = false
window.addEventListener('keydown', (e) => {
  if (e.key.toLowerCase() === 'r') rotateHeld = true
})
window.addEventListener('keyup', (e) => {
  if (e.key.toLowerCase() === 'r') rotateHeld = false
})

viewport.addEventListener('pointerdown', (e) => {
  viewport.setPointerCapture(e.pointerId)
  app.pointerDown(e.clientX, e.clientY)
})
viewport.addEventListener('pointermove', (e) => {
  app.pointerMove(e.clientX, e.clientY, rotateHeld || e.shiftKey)
})
viewport.addEventListener('pointerup', () => app.pointerUp())
viewport.addEventListener('pointercancel', () => app.pointerUp())

window.setInterval(() => void app.poll().catch(() => {}), 3000)
