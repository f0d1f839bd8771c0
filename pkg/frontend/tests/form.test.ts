import { beforeEach, describe, expect, it, vi } from "vitest";

import { FormValidationError, SearchForm, fileToBase64 } from "../src/form";
import type { SearchRequest } from "../src/types";
import { DOMAINS, check, flush, query, queryAll, setValue, submitForm } from "./helpers";

function buildForm(onSearch = vi.fn()) {
  const form = new SearchForm(DOMAINS, onSearch);
  document.body.append(form.element);
  return {
    form,
    onSearch,
    tolerance: query<HTMLInputElement>(form.element, 'input[name="tolerance"]'),
    urlInput: query<HTMLInputElement>(form.element, 'input[name="image_url"]'),
    relMin: query<HTMLInputElement>(form.element, 'input[name="rel_min"]'),
    relMax: query<HTMLInputElement>(form.element, 'input[name="rel_max"]'),
    modeRadio: (mode: string) =>
      query<HTMLInputElement>(form.element, `input[name="mode"][value="${mode}"]`),
    domainRadio: (name: string) =>
      query<HTMLInputElement>(form.element, `input[name="domain"][value="${name}"]`),
  };
}

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("tolerance field rules", () => {
  it("starts in probable mode with an editable tolerance of 0", () => {
    const { tolerance, modeRadio } = buildForm();
    expect(modeRadio("probable").checked).toBe(true);
    expect(tolerance.readOnly).toBe(false);
    expect(tolerance.value).toBe("0");
  });

  it("exact mode renders the field read-only at 0", () => {
    const { tolerance, modeRadio } = buildForm();
    check(modeRadio("exact"));
    expect(tolerance.readOnly).toBe(true);
    expect(tolerance.value).toBe("0");
  });

  it("rejects typing while exact is selected", () => {
    const { tolerance, modeRadio } = buildForm();
    check(modeRadio("exact"));
    setValue(tolerance, "25");
    expect(tolerance.value).toBe("0");
  });

  it("toggling exact, probable, exact restores 0", () => {
    const { tolerance, modeRadio } = buildForm();
    setValue(tolerance, "25");
    expect(tolerance.value).toBe("25");

    check(modeRadio("exact"));
    expect(tolerance.value).toBe("0");
    expect(tolerance.readOnly).toBe(true);

    check(modeRadio("probable"));
    expect(tolerance.readOnly).toBe(false);
    expect(tolerance.value).toBe("0");

    check(modeRadio("exact"));
    expect(tolerance.value).toBe("0");
    expect(tolerance.readOnly).toBe(true);
  });

  it("always sends tolerance 0 in exact mode", async () => {
    const { form, urlInput, modeRadio } = buildForm();
    check(modeRadio("exact"));
    setValue(urlInput, "http://site.test/q.png");
    const request = await form.buildRequest();
    expect(request.mode).toBe("exact");
    expect(request.tolerance).toBe(0);
  });
});

describe("domain selection", () => {
  it("selects the first domain and its bounds by default", () => {
    const { form, domainRadio, relMin, relMax } = buildForm();
    expect(domainRadio("cricket").checked).toBe(true);
    expect(form.domain()).toBe("cricket");
    expect(relMin.value).toBe("2");
    expect(relMax.value).toBe("9");
  });

  it("resets the relevance range when the domain changes", () => {
    const { form, domainRadio, relMin, relMax } = buildForm();
    setValue(relMin, "5");

    check(domainRadio("hockey"));
    expect(form.domain()).toBe("hockey");
    expect(relMin.value).toBe("3");
    expect(relMax.value).toBe("7");

    check(domainRadio("football"));
    expect(relMin.value).toBe("1");
    expect(relMax.value).toBe("5");
  });

  it("renders one radio per domain", () => {
    const { form } = buildForm();
    const radios = queryAll<HTMLInputElement>(form.element, 'input[name="domain"]');
    expect(radios.map((radio) => radio.value)).toEqual(["cricket", "hockey", "football"]);
    expect(radios.filter((radio) => radio.checked)).toHaveLength(1);
  });
});

describe("mandatory field marks", () => {
  it("stars the query image and domain legends", () => {
    const { form } = buildForm();
    const imageLegend = query(form.element, ".image-fields legend");
    const domainLegend = query(form.element, ".domain-fields legend");
    expect(query(imageLegend, ".required-mark").textContent).toBe("*");
    expect(query(domainLegend, ".required-mark").textContent).toBe("*");
  });
});

describe("validation before any request", () => {
  it("shows an inline error and sends nothing when the image is missing", async () => {
    const { form, onSearch } = buildForm();
    submitForm(form.element);
    await flush();

    const error = query<HTMLParagraphElement>(form.element, ".form-error");
    expect(error.hidden).toBe(false);
    expect(error.textContent).toMatch(/query image/i);
    expect(onSearch).not.toHaveBeenCalled();
  });

  it("rejects an inverted relevance range", async () => {
    const { form, onSearch, urlInput, relMin, relMax } = buildForm();
    setValue(urlInput, "http://site.test/q.png");
    setValue(relMin, "8");
    setValue(relMax, "3");
    submitForm(form.element);
    await flush();

    expect(query<HTMLParagraphElement>(form.element, ".form-error").hidden).toBe(false);
    expect(onSearch).not.toHaveBeenCalled();
  });

  it("rejects a fractional tolerance", async () => {
    const { form, onSearch, urlInput, tolerance } = buildForm();
    setValue(urlInput, "http://site.test/q.png");
    setValue(tolerance, "3.7");
    submitForm(form.element);
    await flush();

    expect(query<HTMLParagraphElement>(form.element, ".form-error").hidden).toBe(false);
    expect(onSearch).not.toHaveBeenCalled();
  });

  it("rejects a tolerance above 100", async () => {
    const { form } = buildForm();
    const urlInput = query<HTMLInputElement>(form.element, 'input[name="image_url"]');
    setValue(urlInput, "http://site.test/q.png");
    setValue(query<HTMLInputElement>(form.element, 'input[name="tolerance"]'), "101");
    await expect(form.buildRequest()).rejects.toBeInstanceOf(FormValidationError);
  });

  it("clears the inline error on the next submit", async () => {
    const { form, urlInput } = buildForm();
    submitForm(form.element);
    await flush();
    expect(query<HTMLParagraphElement>(form.element, ".form-error").hidden).toBe(false);

    setValue(urlInput, "http://site.test/q.png");
    submitForm(form.element);
    await flush();
    expect(query<HTMLParagraphElement>(form.element, ".form-error").hidden).toBe(true);
  });
});

describe("request assembly", () => {
  it("passes a URL through as image_url", async () => {
    const captured: SearchRequest[] = [];
    const { form, urlInput } = buildForm(vi.fn((request: SearchRequest) => {
      captured.push(request);
    }));
    setValue(urlInput, "http://site.test/q.png");
    submitForm(form.element);
    await flush();

    expect(captured).toHaveLength(1);
    expect(captured[0]).toEqual({
      image_url: "http://site.test/q.png",
      mode: "probable",
      tolerance: 0,
      domain: "cricket",
      relevance_range: [2, 9],
    });
  });

  it("base64-encodes an uploaded file into image_b64", async () => {
    const bytes = new Uint8Array([137, 80, 78, 71, 13, 10, 26, 10, 0, 1, 2, 3]);
    const file = new File([bytes], "q.png", { type: "image/png" });
    expect(await fileToBase64(file)).toBe(btoa(String.fromCharCode(...bytes)));
  });

  it("prefers the uploaded file over a typed URL", async () => {
    const { form, urlInput } = buildForm();
    setValue(urlInput, "http://site.test/q.png");
    const bytes = new Uint8Array([1, 2, 3]);
    const fileInput = query<HTMLInputElement>(form.element, 'input[name="image_file"]');
    Object.defineProperty(fileInput, "files", {
      value: [new File([bytes], "q.png", { type: "image/png" })],
      configurable: true,
    });

    const request = await form.buildRequest();
    expect(request.image_b64).toBe(btoa(String.fromCharCode(...bytes)));
    expect(request.image_url).toBeUndefined();
  });
});
