/** Dismissible banner for API and network failures. */

export class ErrorBanner {
  readonly element: HTMLDivElement;
  private readonly messageSpan: HTMLSpanElement;

  constructor() {
    this.element = document.createElement("div");
    this.element.className = "error-banner";
    this.element.setAttribute("role", "alert");
    this.element.hidden = true;

    this.messageSpan = document.createElement("span");
    this.messageSpan.className = "error-message";

    const dismiss = document.createElement("button");
    dismiss.type = "button";
    dismiss.className = "dismiss";
    dismiss.textContent = "Dismiss";
    dismiss.addEventListener("click", () => this.hide());

    this.element.append(this.messageSpan, dismiss);
  }

  show(message: string): void {
    this.messageSpan.textContent = message;
    this.element.hidden = false;
  }

  hide(): void {
    this.element.hidden = true;
    this.messageSpan.textContent = "";
  }

  get visible(): boolean {
    return !this.element.hidden;
  }
}
