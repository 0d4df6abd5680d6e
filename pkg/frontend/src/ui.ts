import type { SceneStore } from './state'
import type { ComparisonReport, SessionScore } from './types'

const STATUS_LABELS: Record<string, string> = {
  free: 'Free',
  grabbed: 'Grabbed',
  snapped: 'Snapped',
  flagged_defective: 'Flagged defective',
}

export class StatusPanel {
  constructor(
    private container: HTMLElement,
    private store: SceneStore,
    onFlag: (partId: string) => void,
  ) {
    for (const partId of store.order) {
      const row = document.createElement('div')
      row.className = 'part-row'
      row.dataset.part = partId

      const name = document.createElement('span')
      name.className = 'part-name'
      name.textContent = partId

      const badge = document.createElement('span')
      badge.className = 'badge'

      const flag = document.createElement('button')
      flag.className = 'flag-btn'
      flag.textContent = 'flag defective'
      flag.addEventListener('click', () => onFlag(partId))

      row.append(name, badge, flag)
      container.appendChild(row)
    }
    this.update()
  }

  update(): void {
    for (const row of this.container.querySelectorAll<HTMLElement>('.part-row')) {
      const partId = row.dataset.part!
      const status = this.store.partStatus(partId)
      const badge = row.querySelector<HTMLElement>('.badge')!
      badge.textContent = STATUS_LABELS[status] ?? status
      badge.className = `badge badge-${status}`
      const flag = row.querySelector<HTMLButtonElement>('.flag-btn')!
      flag.disabled = status === 'snapped' || status === 'flagged_defective'
    }
  }
}

/** Per-parameter difference table shown when a part is rejected. */
export function renderRejectionTable(
  container: HTMLElement,
  partId: string,
  report: ComparisonReport,
): void {
  container.innerHTML = ''
  const heading = document.createElement('h3')
  heading.textContent = `${partId}: rejected (max difference ${fmt(report.max_difference)} ` +
    `at ${report.worst_parameter}, threshold ${fmt(report.threshold)})`
  container.appendChild(heading)

  const table = document.createElement('table')
  table.className = 'rejection-table'
  const head = table.insertRow()
  for (const label of ['parameter', 'reference', 'scanned', 'rel diff', 'verdict']) {
    const cell = document.createElement('th')
    cell.textContent = label
    head.appendChild(cell)
  }
  for (const entry of report.parameters) {
    const row = table.insertRow()
    row.insertCell().textContent = entry.parameter
    row.insertCell().textContent = fmt(entry.bim)
    row.insertCell().textContent = fmt(entry.scanned)
    row.insertCell().textContent = fmt(entry.relative_difference)
    const verdict = row.insertCell()
    verdict.textContent = entry.pass ? 'pass' : 'FAIL'
    verdict.className = entry.pass ? 'pass' : 'fail'
  }
  container.appendChild(table)
  container.hidden = false
}

export function clearRejectionTable(container: HTMLElement): void {
  container.innerHTML = ''
  container.hidden = true
}

export function renderGrade(container: HTMLElement, score: SessionScore): void {
  container.innerHTML = ''
  const heading = document.createElement('h3')
  heading.textContent = 'Session ended'
  const grade = document.createElement('p')
  grade.className = 'grade'
  grade.textContent = `Grade: ${fmt(score.grade)}`
  const detail = document.createElement('p')
  detail.textContent =
    `accuracy ${fmt(score.accuracy)}, elapsed ${score.elapsed_ms} ms ` +
    `(par ${score.par_time_ms} ms)`
  container.append(heading, grade, detail)
  container.hidden = false
}

export function showBanner(container: HTMLElement, message: string, onRetry: () => void): void {
  container.innerHTML = ''
  const text = document.createElement('span')
  text.textContent = message
  const retry = document.createElement('button')
  retry.textContent = 'retry'
  retry.addEventListener('click', onRetry)
  container.append(text, retry)
  container.hidden = false
}

export function hideBanner(container: HTMLElement): void {
  container.innerHTML = ''
  container.hidden = true
}

function fmt(value: number): string {
  return Number(value.toPrecision(6)).toString()
}
