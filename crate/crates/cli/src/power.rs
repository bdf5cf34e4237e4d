//! Expands `^` powers in command-line words: `x^3`, `X^-2`, `(aX)^4`.
//! Everything else is passed through to the shared word grammar.

fn invert(s: &str) -> String {
    s.chars()
        .rev()
        .map(|c| match c {
            'a' | 'A' => 'a',
            c if c.is_ascii_lowercase() => c.to_ascii_uppercase(),
            c => c.to_ascii_lowercase(),
        })
        .collect()
}

fn power(base: &str, e: i64) -> String {
    let unit = if e < 0 { invert(base) } else { base.to_string() };
    unit.repeat(e.unsigned_abs() as usize)
}

pub fn expand(input: &str) -> Result<String, String> {
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    let mut stack: Vec<String> = vec![String::new()];
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        i += 1;
        let atom = match c {
            '(' => {
                stack.push(String::new());
                continue;
            }
            ')' => {
                if stack.len() == 1 {
                    return Err(format!("unbalanced ')' in {input:?}"));
                }
                stack.pop().expect("checked depth")
            }
            '^' => return Err(format!("'^' without a base in {input:?}")),
            c if c.is_ascii_digit() || c == '-' => {
                return Err(format!("stray number in {input:?}; powers are written x^3"));
            }
            c => c.to_string(),
        };
        let mut e = 1;
        if chars.get(i) == Some(&'^') {
            let start = i + 1;
            let mut end = start;
            if chars.get(end) == Some(&'-') {
                end += 1;
            }
            while chars.get(end).is_some_and(|c| c.is_ascii_digit()) {
                end += 1;
            }
            let digits: String = chars[start..end].iter().collect();
            e = digits.parse().map_err(|_| format!("bad exponent after '^' in {input:?}"))?;
            i = end;
        }
        stack.last_mut().expect("stack is never empty").push_str(&power(&atom, e));
    }
    if stack.len() != 1 {
        return Err(format!("unbalanced '(' in {input:?}"));
    }
    Ok(stack.pop().expect("one level left"))
}
