/**
 * The search form. All input rules live here so an invalid query can never
 * leave the browser:
 *
 *  - exact mode locks the tolerance field read-only at 0; switching back to
 *    probable makes it editable again with the default 0
 *  - exactly one domain is selected at a time, and changing it resets the
 *    relevance range to that domain's bounds from /api/domains
 *  - the query image and domain are mandatory (marked with *)
 */

import type { DomainInfo, SearchMode, SearchRequest } from "./types";

export class FormValidationError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "FormValidationError";
  }
}

/** Encode an uploaded file for the image_b64 request field. */
export async function fileToBase64(file: Blob): Promise<string> {
  const bytes = new Uint8Array(await file.arrayBuffer());
  let binary = "";
  const chunk = 0x8000;
  for (let i = 0; i < bytes.length; i += chunk) {
    binary += String.fromCharCode(...bytes.subarray(i, i + chunk));
  }
  return btoa(binary);
}

function field(label: string, input: HTMLElement, mandatory = false): HTMLLabelElement {
  const wrap = document.createElement("label");
  const text = document.createElement("span");
  text.textContent = mandatory ? `${label} ` : label;
  if (mandatory) {
    const star = document.createElement("span");
    star.className = "required-mark";
    star.textContent = "*";
    text.append(star);
  }
  wrap.append(text, input);
  return wrap;
}

export class SearchForm {
  readonly element: HTMLFormElement;

  private readonly urlInput: HTMLInputElement;
  private readonly fileInput: HTMLInputElement;
  private readonly toleranceInput: HTMLInputElement;
  private readonly relMinInput: HTMLInputElement;
  private readonly relMaxInput: HTMLInputElement;
  private readonly submitButton: HTMLButtonElement;
  private readonly errorLine: HTMLParagraphElement;
  private readonly modeInputs: HTMLInputElement[] = [];

  private selectedDomain: string | null = null;

  constructor(
    private readonly domains: DomainInfo[],
    onSearch: (request: SearchRequest) => void | Promise<void>,
  ) {
    this.element = document.createElement("form");
    this.element.className = "search-form";
    this.element.noValidate = true;

    this.urlInput = document.createElement("input");
    this.urlInput.type = "url";
    this.urlInput.name = "image_url";
    this.urlInput.placeholder = "https://example.org/picture.png";

    this.fileInput = document.createElement("input");
    this.fileInput.type = "file";
    this.fileInput.name = "image_file";
    this.fileInput.accept = "image/*";

    const imageSet = document.createElement("fieldset");
    imageSet.className = "image-fields";
    const imageLegend = document.createElement("legend");
    imageLegend.append("Query image ");
    const star = document.createElement("span");
    star.className = "required-mark";
    star.textContent = "*";
    imageLegend.append(star);
    imageSet.append(
      imageLegend,
      field("Image URL", this.urlInput),
      field("or upload a file", this.fileInput),
    );

    const modeSet = document.createElement("fieldset");
    modeSet.className = "mode-fields";
    const modeLegend = document.createElement("legend");
    modeLegend.textContent = "Match mode";
    modeSet.append(modeLegend);
    for (const mode of ["probable", "exact"] as const) {
      const radio = document.createElement("input");
      radio.type = "radio";
      radio.name = "mode";
      radio.value = mode;
      radio.checked = mode === "probable";
      radio.addEventListener("change", () => this.applyModeRules());
      this.modeInputs.push(radio);
      modeSet.append(field(mode, radio));
    }

    this.toleranceInput = document.createElement("input");
    this.toleranceInput.type = "number";
    this.toleranceInput.name = "tolerance";
    this.toleranceInput.min = "0";
    this.toleranceInput.max = "100";
    this.toleranceInput.step = "1";
    this.toleranceInput.value = "0";
    // Belt and braces for environments that let scripts edit read-only fields.
    this.toleranceInput.addEventListener("input", () => {
      if (this.mode() === "exact" && this.toleranceInput.value !== "0") {
        this.toleranceInput.value = "0";
      }
    });
    modeSet.append(field("Tolerance", this.toleranceInput));

    const domainSet = document.createElement("fieldset");
    domainSet.className = "domain-fields";
    const domainLegend = document.createElement("legend");
    domainLegend.append("Domain ");
    const domainStar = document.createElement("span");
    domainStar.className = "required-mark";
    domainStar.textContent = "*";
    domainLegend.append(domainStar);
    domainSet.append(domainLegend);
    if (domains.length === 0) {
      const empty = document.createElement("p");
      empty.className = "no-domains";
      empty.textContent = "No domains indexed yet.";
      domainSet.append(empty);
    }
    domains.forEach((domain, i) => {
      const radio = document.createElement("input");
      radio.type = "radio";
      radio.name = "domain";
      radio.value = domain.name;
      radio.checked = i === 0;
      radio.addEventListener("change", () => {
        if (radio.checked) this.selectDomain(domain);
      });
      domainSet.append(field(domain.name, radio));
    });

    this.relMinInput = document.createElement("input");
    this.relMinInput.type = "number";
    this.relMinInput.name = "rel_min";
    this.relMinInput.step = "any";
    this.relMaxInput = document.createElement("input");
    this.relMaxInput.type = "number";
    this.relMaxInput.name = "rel_max";
    this.relMaxInput.step = "any";

    const rangeSet = document.createElement("fieldset");
    rangeSet.className = "range-fields";
    const rangeLegend = document.createElement("legend");
    rangeLegend.textContent = "Relevance range";
    rangeSet.append(
      rangeLegend,
      field("min", this.relMinInput),
      field("max", this.relMaxInput),
    );

    this.errorLine = document.createElement("p");
    this.errorLine.className = "form-error";
    this.errorLine.setAttribute("role", "alert");
    this.errorLine.hidden = true;

    this.submitButton = document.createElement("button");
    this.submitButton.type = "submit";
    this.submitButton.textContent = "Search";

    this.element.append(imageSet, modeSet, domainSet, rangeSet, this.errorLine, this.submitButton);

    const first = domains[0];
    if (first) this.selectDomain(first);
    this.applyModeRules();

    this.element.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit(onSearch);
    });
  }

  private async submit(onSearch: (request: SearchRequest) => void | Promise<void>): Promise<void> {
    this.clearError();
    let request: SearchRequest;
    try {
      request = await this.buildRequest();
    } catch (err) {
      if (err instanceof FormValidationError) {
        this.showError(err.message);
        return;
      }
      throw err;
    }
    await onSearch(request);
  }

  mode(): SearchMode {
    const checked = this.modeInputs.find((input) => input.checked);
    return (checked?.value as SearchMode) ?? "probable";
  }

  domain(): string | null {
    return this.selectedDomain;
  }

  relevanceRange(): [string, string] {
    return [this.relMinInput.value, this.relMaxInput.value];
  }

  /** Disable the submit button while a search is in flight. */
  setBusy(busy: boolean): void {
    this.submitButton.disabled = busy;
    this.element.classList.toggle("busy", busy);
  }

  private selectDomain(domain: DomainInfo): void {
    this.selectedDomain = domain.name;
    this.relMinInput.value = String(domain.rel_min);
    this.relMaxInput.value = String(domain.rel_max);
  }

  private applyModeRules(): void {
    if (this.mode() === "exact") {
      this.toleranceInput.readOnly = true;
      this.toleranceInput.value = "0";
    } else {
      this.toleranceInput.readOnly = false;
      this.toleranceInput.value = "0";
    }
  }

  private showError(message: string): void {
    this.errorLine.textContent = message;
    this.errorLine.hidden = false;
  }

  private clearError(): void {
    this.errorLine.textContent = "";
    this.errorLine.hidden = true;
  }

  /**
   * Assemble a request that satisfies every server-side rule, or raise
   * FormValidationError without touching the network.
   */
  async buildRequest(): Promise<SearchRequest> {
    const mode = this.mode();
    const request: Partial<SearchRequest> = { mode };

    const file = this.fileInput.files?.[0];
    const url = this.urlInput.value.trim();
    if (file) {
      request.image_b64 = await fileToBase64(file);
    } else if (url) {
      request.image_url = url;
    } else {
      throw new FormValidationError("Provide a query image: enter a URL or choose a file.");
    }

    if (!this.selectedDomain) {
      throw new FormValidationError("Select a domain.");
    }
    request.domain = this.selectedDomain;

    if (mode === "exact") {
      request.tolerance = 0;
    } else {
      const tolerance = Number(this.toleranceInput.value);
      if (!Number.isInteger(tolerance) || tolerance < 0 || tolerance > 100) {
        throw new FormValidationError("Tolerance must be a whole number between 0 and 100.");
      }
      request.tolerance = tolerance;
    }

    const min = Number(this.relMinInput.value);
    const max = Number(this.relMaxInput.value);
    if (this.relMinInput.value.trim() === "" || this.relMaxInput.value.trim() === "" ||
        Number.isNaN(min) || Number.isNaN(max)) {
      throw new FormValidationError("Relevance range needs numeric min and max.");
    }
    if (min > max) {
      throw new FormValidationError("Relevance range min cannot exceed max.");
    }
    request.relevance_range = [min, max];

    return request as SearchRequest;
  }
}
