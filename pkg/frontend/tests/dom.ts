/* Helpers for driving the page in tests: file-input stuffing and
 * condition polling (the page queues its work, so effects land a tick or
 * two after the event that caused them).
 */

export function setFiles(input: HTMLInputElement, files: File[]): void {
  // The files list is normally read-only; tests shadow it per instance.
  Object.defineProperty(input, "files", { value: files, configurable: true });
  input.dispatchEvent(new Event("change", { bubbles: true }));
}

export function fileOf(bytes: Uint8Array | string, name: string): File {
  const content = typeof bytes === "string" ? bytes : new Uint8Array(bytes);
  return new File([content as BlobPart], name);
}

export async function until(what: string, cond: () => boolean,
                            timeoutMs: number = 2000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!cond()) {
    if (Date.now() > deadline) {
      throw new Error(`timed out waiting for ${what}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 2));
  }
}

export function click(root: ParentNode, selector: string): void {
  const node = root.querySelector(selector);
  if (node === null) {
    throw new Error(`no element matches ${selector}`);
  }
  (node as HTMLElement).click();
}

export function setValue(root: ParentNode, selector: string, value: string): void {
  const node = root.querySelector(selector);
  if (node === null) {
    throw new Error(`no element matches ${selector}`);
  }
  (node as HTMLInputElement | HTMLSelectElement | HTMLTextAreaElement).value = value;
}

export function textOf(root: ParentNode, selector: string): string {
  const node = root.querySelector(selector);
  if (node === null) {
    throw new Error(`no element matches ${selector}`);
  }
  return node.textContent ?? "";
}
